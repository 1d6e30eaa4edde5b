#pragma once

#include <stdexcept>
#include <string>

namespace zslab {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad input from the caller (malformed group string, wrong rank, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// A theorem-style precondition does not hold for the given input.
class HypothesisError : public Error {
public:
  using Error::Error;
};

// A persisted or constructed object failed re-verification.
class ValidationError : public Error {
public:
  using Error::Error;
};

// The search hit a configured resource limit before finishing.
class ResourceLimit : public Error {
public:
  using Error::Error;
};

} // namespace zslab
