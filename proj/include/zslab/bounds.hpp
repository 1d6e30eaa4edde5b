#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>
#include "json.hpp"
#include "zslab/group.hpp"
#include "zslab/parallel.hpp"

namespace zslab {

// One evaluated bound on the tame degree of a group (or of a Krull monoid
// with cyclic class group of order n).
struct BoundReport {
  std::string target;  // group string, or "n=<n>"
  std::string name;
  bool upper = false;
  std::optional<Rational> exact;  // set when the bound is a rational number
  double value = 0;
  bool strict = false;  // the invariant is strictly beyond value
  std::vector<std::string> hypotheses;
  std::string value_text() const;
  nlohmann::json to_json() const;
};

// 1 + exp(G) k*(G).
Rational lower_bound_kstar(const GroupSpec& group);

// 2n - 7 sqrt(n) + 10 for n >= 25 (strict lower bound for cyclic groups).
double lower_bound_cyclic_sqrt(std::int64_t n);

struct QmBound {
  std::int64_t value = 0;  // n + (q-1)(m-1)
  std::int64_t q = 0, m = 0, j = 0;
};
// Best n + (q-1)(m-1) over q in [2, n-2] coprime to n with m = n / q; the
// smallest q wins ties. Throws HypothesisError for n < 5 and for n = 6,
// where no q qualifies.
QmBound lower_bound_cyclic_qm(std::int64_t n);

// Value of the alternating-basis construction on the standard basis.
// Requires even, nonzero rank.
int lower_bound_rank(const GroupSpec& group);
// Whether the homocyclic closed form applies: G = C_n^r, r even, gcd(r-1,n)=1.
bool homocyclic_rank_hypothesis(const GroupSpec& group);

// 1 + D(D-1)/2.
std::int64_t upper_bound_generic(int davenport);
std::int64_t upper_bound_generic(const GroupSpec& group);

// Upper bound for cyclic class group of order n >= 5, three cases by the
// shape of n. Natural logarithms throughout.
double upper_bound_cyclic(std::int64_t n);
// Which case upper_bound_cyclic used: "prime", "prime-power" or "general".
std::string cyclic_case(std::int64_t n);

// floor((p-1)^2 / floor(p/t)) + 1, bound for m(C_p, t+1).
int m_bound_prime(int p, int t);

// Every implemented bound that applies to the group (and the cyclic ones
// when the group is cyclic).
std::vector<BoundReport> bound_reports(const GroupSpec& group);

// ---- m(G, t) ----

struct MInvariantOptions {
  std::uint64_t node_limit = 200'000'000;
};
struct MInvariantResult {
  int value = 0;
  int longest_counterexample = 0;  // 0 when there is none
  std::vector<Elem> counterexample;  // one of that length
  // counterexample_exists[l] for l = 0..longest+1; monotone when it is a
  // run of trues followed by false
  std::vector<bool> counterexample_exists;
  bool monotone = true;
  std::uint64_t nodes = 0;
};
// Smallest l such that every sequence over G \ {0} with v_g <= ord(g) and
// length >= l has a minimal zero-sum subsequence of length >= t. Exhaustive;
// throws PartialResult past the node limit.
MInvariantResult m_invariant(const GroupSpec& group, int t, const MInvariantOptions& options = {});

// ---- checks of arithmetic lemmas ----

struct CheckReport {
  explicit CheckReport(std::string check_name = {}) : name(std::move(check_name)) {}
  std::string name;
  std::uint64_t checked = 0;
  std::vector<std::string> violations;  // capped
  bool ok() const { return violations.empty(); }
  nlohmann::json to_json() const;
  void fail(std::string what);
};

// exp(G) k*(G) >= d*(G), with equality exactly for C_{p^a}^r.
CheckReport check_exp_kstar(std::int64_t max_order);

// Totient inequalities for n with at least two distinct prime factors.
// Exhaustive over [lo, hi]; random_points extra samples up to random_hi.
struct TotientCheckOptions {
  std::int64_t lo = 6, hi = 10'000;
  std::int64_t random_points = 10'000;
  std::int64_t random_hi = 100'000'000;
  std::uint64_t seed = 0x70713;
  Parallelism parallel;
};
CheckReport check_totient_density(const TotientCheckOptions& options);    // phi_m(n) >= m phi(n) / 2n
CheckReport check_totient_fraction(const TotientCheckOptions& options);   // phi_{n/t}(n) >= phi(n) / 2.2t
CheckReport check_totient_threshold(const TotientCheckOptions& options);  // floor vs n / (2^{s+1} sqrt(2s)), n >= 4376

// Harmonic-sum lemma: sum i c_i <= C m for all m implies
// sum_{i=2}^m c_i <= C (1 + sum_{i=3}^m 1/i). Exact rationals.
CheckReport check_sum_lemma(int trials, int max_len = 50, std::uint64_t seed = 0x50b);

// Distinct zero-sum free sequences of length r over C_2^r: some k <= l-1
// atoms dividing their product have total length >= 3(l-1). Exhaustive over
// all l-sets when samples == 0, otherwise random l-sets.
CheckReport check_zero_sum_free_packing(int r, int samples = 0, std::uint64_t seed = 0x45);

// For minimal covers of atoms over C_2^r with m >= 3 parts,
// 2 min L(W) <= m(r-1) + 1. Exhaustive over atoms when samples == 0,
// otherwise that many random minimal covers.
CheckReport check_cover_length_bound(int r, int samples = 0, std::uint64_t seed = 0x46);

} // namespace zslab
