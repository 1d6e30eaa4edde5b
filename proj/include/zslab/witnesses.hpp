#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>
#include "zslab/krull_model.hpp"
#include "zslab/tame.hpp"

namespace zslab {

// A named extremal configuration together with the results of re-checking
// every claim it embodies.
struct Witness {
  std::string name;
  nlohmann::json parameters;
  CoverConfig cover;
  int claimed_value = 0;
  std::vector<std::pair<std::string, bool>> checks;
  bool verified() const;
  nlohmann::json to_json() const;
  void check(std::string what, bool ok) { checks.emplace_back(std::move(what), ok); }
};

// A basis is a list of coordinate vectors; empty means the standard basis.
using Basis = std::vector<std::vector<int>>;

// Over C_n with generator g: U = (qg)^n covered by V^{n-m} V'^m where
// V = (qg) g^{n-q}, V' = (qg)(-g)^q. Value n + (q-1)(m-1).
Witness witness_cyclic_qm(int n, int q, int generator = 1);

// Alternating construction on r independent elements (r even). Value
// 1 + sum_i (2 floor(r / 2 ord e_i) + (r/2 mod ord e_i)).
Witness witness_rank(const GroupSpec& group, const Basis& basis = {});

// The explicit covers over C_3^2 (value 7) and C_4^2 (value 8).
Witness witness_c33(const Basis& basis = {});
Witness witness_c44(const Basis& basis = {});

// U = (-e0) e0 with e0 the sum of the standard basis, covered by
// e0 prod e_i^{n_i - 1} and its negative. Value 1 + d*(G).
Witness witness_dstar(const GroupSpec& group);

// Glues witnesses over G1 and G2 into one over G1 + G2 (normalized) with
// value at least value1 + value2 - 1. Refuses inputs whose value does not
// exceed the Davenport constant, unless the second is a dstar witness.
Witness witness_compose(const Witness& first, const Witness& second);

// The Krull model over C_2^3 with two primes in one class and the H-atoms
// u, v_1..v_4 giving t(H) >= 5.
struct KrullWitness {
  KrullModel model;
  ModelCover cover;
  int claimed_value = 5;
  KrullModel reduced_model;  // the same model without the second prime
  int reduced_local_value = 0;
  std::vector<std::pair<std::string, bool>> checks;
  bool verified() const;
  nlohmann::json to_json() const;
};
KrullWitness witness_c23_krull();

// Names accepted by make_witness, for the CLI.
std::vector<std::string> witness_names();
// params: {"n":..,"q":..} for cyclic_qm, {"group":"2,2,2,2"} for rank and
// dstar, {"basis":[[..],[..]]} optional for rank/c33/c44.
nlohmann::json make_witness(const std::string& name, const nlohmann::json& params);

} // namespace zslab
