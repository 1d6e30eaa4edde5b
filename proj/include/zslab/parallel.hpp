#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>

#include "json.hpp"
#include "zslab/error.hpp"

namespace zslab {

// Thread count handed down from the front end. Library code never spawns
// threads on its own beyond what this allows.
struct Parallelism {
  int threads = 1;
};

// Runs fn(0..n-1), distributing indices over the configured threads. The
// first exception thrown by any task is rethrown after all workers stop.
void parallel_for(const Parallelism& par, std::size_t n, const std::function<void(std::size_t)>& fn);

// Shared running maximum; offer() returns true when the value increased.
class MonotoneMax {
public:
  explicit MonotoneMax(int start = 0) : value_(start) {}
  bool offer(int candidate);
  int get() const { return value_.load(std::memory_order_relaxed); }

private:
  std::atomic<int> value_;
};

// Wall-clock budget shared by the workers of one computation.
class Budget {
public:
  Budget() = default;
  explicit Budget(std::optional<double> seconds);

  bool limited() const { return deadline_.has_value(); }
  // Cheap to call often; consults the clock only every few hundred calls.
  bool expired();
  bool stopped() const { return stopped_.load(std::memory_order_relaxed); }
  void stop() { stopped_.store(true, std::memory_order_relaxed); }

private:
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::atomic<bool> stopped_{false};
  std::atomic<unsigned> calls_{0};
};

// Thrown when a budget runs out; carries what was established so far.
class PartialResult : public Error {
public:
  PartialResult(const std::string& what, int best_lower_bound, nlohmann::json certificate, nlohmann::json frontier)
      : Error(what), best_lower_bound_(best_lower_bound), certificate_(std::move(certificate)),
        frontier_(std::move(frontier)) {}
  int best_lower_bound() const { return best_lower_bound_; }
  const nlohmann::json& certificate() const { return certificate_; }
  const nlohmann::json& frontier() const { return frontier_; }

private:
  int best_lower_bound_;
  nlohmann::json certificate_;
  nlohmann::json frontier_;
};

} // namespace zslab
