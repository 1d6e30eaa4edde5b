#include "zslab/bounds.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "zslab/atoms.hpp"
#include "zslab/error.hpp"

namespace zslab {

std::string BoundReport::value_text() const {
  if (exact) {
    std::ostringstream out;
    out << exact->numerator();
    if (exact->denominator() != 1) out << "/" << exact->denominator();
    return out.str();
  }
  std::ostringstream out;
  out.precision(6);
  out << std::fixed << value;
  return out.str();
}

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j;
  j["target"] = target;
  j["bound"] = name;
  j["kind"] = upper ? "upper" : "lower";
  j["value"] = value_text();
  j["strict"] = strict;
  j["hypotheses"] = hypotheses;
  return j;
}

Rational lower_bound_kstar(const GroupSpec& group) {
  if (group.cardinality() == 1) throw HypothesisError("lower_bound_kstar: group must be nontrivial");
  return Rational(1) + Rational(group.exponent()) * classic_invariants(group).kstar;
}

double lower_bound_cyclic_sqrt(std::int64_t n) {
  if (n < 25) throw HypothesisError("lower_bound_cyclic_sqrt: needs n >= 25");
  return 2.0 * static_cast<double>(n) - 7.0 * std::sqrt(static_cast<double>(n)) + 10.0;
}

QmBound lower_bound_cyclic_qm(std::int64_t n) {
  if (n < 5) throw HypothesisError("lower_bound_cyclic_qm: needs n >= 5");
  QmBound best;
  for (std::int64_t q = 2; q <= n - 2; ++q) {
    if (std::gcd(q, n) != 1) continue;
    const std::int64_t m = n / q;
    const std::int64_t value = n + (q - 1) * (m - 1);
    if (value > best.value) best = {value, q, m, n - q * m};
  }
  // only n = 6 has no such q
  if (best.q == 0) throw HypothesisError("lower_bound_cyclic_qm: no q in [2, n-2] is coprime to n = " + std::to_string(n));
  return best;
}

int lower_bound_rank(const GroupSpec& group) {
  const int r = group.rank();
  if (r == 0) throw HypothesisError("lower_bound_rank: trivial group has no independent elements");
  if (r % 2 != 0)
    throw HypothesisError("lower_bound_rank: rank " + std::to_string(r) + " is odd, the construction needs an even number of independent elements");
  // the standard basis has orders n_1 | ... | n_r, so all pairwise gcds are > 1
  int value = 1;
  for (int order : group.factors()) value += 2 * (r / (2 * order)) + (r / 2) % order;
  return value;
}

bool homocyclic_rank_hypothesis(const GroupSpec& group) {
  const auto& f = group.factors();
  const int r = group.rank();
  if (r == 0 || r % 2 != 0) return false;
  for (int x : f)
    if (x != f.front()) return false;
  return std::gcd(r - 1, f.front()) == 1;
}

std::int64_t upper_bound_generic(int davenport) {
  const std::int64_t d = davenport;
  return 1 + d * (d - 1) / 2;
}

namespace {

bool is_p_group(const GroupSpec& group) {
  if (group.cardinality() == 1) return true;
  return factorize(group.cardinality()).size() == 1;
}

int davenport_of(const GroupSpec& group) {
  // D = D* for p-groups and for rank <= 2
  if (is_p_group(group) || group.rank() <= 2) return classic_invariants(group).Dstar;
  return davenport(group);
}

} // namespace

std::int64_t upper_bound_generic(const GroupSpec& group) { return upper_bound_generic(davenport_of(group)); }

std::string cyclic_case(std::int64_t n) {
  const auto f = factorize(n);
  if (f.size() == 1) return f.front().second == 1 ? "prime" : "prime-power";
  return "general";
}

double upper_bound_cyclic(std::int64_t n) {
  if (n < 5) throw HypothesisError("upper_bound_cyclic: needs n >= 5");
  const auto f = factorize(n);
  if (f.size() == 1 && f.front().second == 1) {
    const double p = static_cast<double>(n);
    return 1.0 + 2.0 * (p - 1) * p / (p + 5) + 2.0 * (p - 1) * (0.5 + std::log((p + 3) / 2));
  }
  if (f.size() == 1) {
    const std::int64_t p = f.front().first;
    const int alpha = f.front().second;
    std::int64_t p_alpha1 = p;
    for (int i = 0; i < alpha; ++i) p_alpha1 *= p;
    // integer part: 1 - 2 alpha + 2 alpha n, then the two real terms
    const std::int64_t whole = 1 - 2 * alpha + 2 * alpha * n;
    double logs = 0;
    std::int64_t pi = 1;
    for (int i = 1; i <= alpha; ++i) {
      pi *= p;
      logs += static_cast<double>(pi - 1) * std::log(static_cast<double>(pi) / 2);
    }
    return static_cast<double>(whole) + 2.0 * static_cast<double>(p_alpha1) / static_cast<double>(p - 1) + 3.0 * logs;
  }
  // General case. The logarithm term runs over the divisors d >= 4376 only;
  // for smaller d its argument can be zero or negative.
  std::int64_t sum_d_minus_1 = 0, sum_small_d = 0;
  double large_terms = 0, log_terms = 0;
  for (std::int64_t d : divisors(n)) {
    if (d == 1) continue;
    sum_d_minus_1 += d - 1;
    if (d <= 4375) {
      sum_small_d += d;
      continue;
    }
    const int w = omega_distinct_primes(d);
    large_terms += std::pow(2.0, w + 1) * std::sqrt(2.0 * w);
    const double denom = std::pow(2.0, w + 1) * std::sqrt(2.0 * w - 1) + 1;
    const double arg = std::floor(static_cast<double>(d + 1) / denom - 1);
    if (arg <= 0) throw Error("upper_bound_cyclic: nonpositive logarithm argument at d=" + std::to_string(d));
    log_terms += static_cast<double>(d - 1) * std::log(arg);
  }
  const Rational exact_part = Rational(1) + Rational(43, 20) * Rational(sum_d_minus_1) + Rational(n) * Rational(sum_small_d, 2);
  return boost::rational_cast<double>(exact_part) + static_cast<double>(n) * large_terms + 3.3 * log_terms;
}

int m_bound_prime(int p, int t) {
  if (!is_prime(p)) throw HypothesisError("m_bound_prime: " + std::to_string(p) + " is not prime");
  if (t < 1 || t > p - 1) throw HypothesisError("m_bound_prime: t must lie in [1, p-1]");
  return (p - 1) * (p - 1) / (p / t) + 1;
}

std::vector<BoundReport> bound_reports(const GroupSpec& group) {
  std::vector<BoundReport> out;
  const std::string target = group.to_string();
  if (group.cardinality() == 1) return out;
  {
    BoundReport b{target, "kstar", false, lower_bound_kstar(group), 0, false, {"|G|>1"}};
    b.value = boost::rational_cast<double>(*b.exact);
    out.push_back(b);
  }
  if (group.rank() % 2 == 0) {
    BoundReport b{target, "rank", false, Rational(lower_bound_rank(group)), 0, false, {"rank even"}};
    b.value = lower_bound_rank(group);
    if (homocyclic_rank_hypothesis(group)) b.hypotheses.push_back("homocyclic, gcd(r-1,n)=1");
    out.push_back(b);
  }
  {
    const int d = davenport_of(group);
    BoundReport b{target, "generic", true, Rational(upper_bound_generic(d)), 0, false, {"D=" + std::to_string(d)}};
    b.value = static_cast<double>(upper_bound_generic(d));
    out.push_back(b);
  }
  if (group.rank() == 1) {
    const std::int64_t n = group.exponent();
    if (n >= 5 && n != 6) {
      const QmBound qm = lower_bound_cyclic_qm(n);
      BoundReport b{target, "cyclic_qm", false, Rational(qm.value), static_cast<double>(qm.value), false,
                    {"n>=5", "q=" + std::to_string(qm.q), "m=" + std::to_string(qm.m), "j=" + std::to_string(qm.j)}};
      out.push_back(b);
    }
    if (n >= 25) out.push_back({target, "cyclic_sqrt", false, std::nullopt, lower_bound_cyclic_sqrt(n), true, {"n>=25"}});
    if (n >= 5)
      out.push_back({target, "cyclic_upper", true, std::nullopt, upper_bound_cyclic(n), false,
                     {"n>=5", "case " + cyclic_case(n), "Krull monoid with cyclic class group"}});
  }
  return out;
}

} // namespace zslab
