#include <algorithm>
#include <functional>
#include <cmath>
#include <mutex>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "zslab/atoms.hpp"
#include "zslab/bounds.hpp"
#include "zslab/error.hpp"
#include "zslab/factorization.hpp"
#include "zslab/tame.hpp"

namespace zslab {

nlohmann::json CheckReport::to_json() const {
  return {{"check", name}, {"checked", checked}, {"ok", ok()}, {"violations", violations}};
}

void CheckReport::fail(std::string what) {
  if (violations.size() < 20) violations.push_back(std::move(what));
}

CheckReport check_exp_kstar(std::int64_t max_order) {
  CheckReport rep{"exp_kstar_vs_dstar"};
  for (std::int64_t order = 2; order <= max_order; ++order) {
    for (const GroupSpec& g : groups_of_order(order)) {
      ++rep.checked;
      const auto inv = classic_invariants(g);
      const Rational lhs = Rational(g.exponent()) * inv.kstar;
      const bool homocyclic_p = factorize(order).size() == 1 &&
                                std::all_of(g.factors().begin(), g.factors().end(), [&](int x) { return x == g.exponent(); });
      if (lhs < Rational(inv.dstar)) rep.fail(g.to_string() + ": exp*k* < d*");
      if ((lhs == Rational(inv.dstar)) != homocyclic_p) rep.fail(g.to_string() + ": equality case misclassified");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// totient inequalities

namespace {

using Wide = __int128;

struct Radical {
  std::int64_t n = 0;
  int s = 0;
  std::int64_t phi = 0;
  std::vector<std::pair<std::int64_t, int>> squarefree;  // (d, mobius)
};

Radical radical_of(std::int64_t n) {
  Radical r;
  r.n = n;
  std::vector<std::int64_t> primes;
  for (auto [p, e] : factorize(n)) primes.push_back(p);
  r.s = static_cast<int>(primes.size());
  r.phi = euler_phi(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << primes.size()); ++mask) {
    std::int64_t d = 1;
    int sign = 1;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (mask >> i & 1U) {
        d *= primes[i];
        sign = -sign;
      }
    r.squarefree.emplace_back(d, sign);
  }
  return r;
}

std::int64_t phi_upto(const Radical& r, std::int64_t m) {
  std::int64_t total = 0;
  for (auto [d, sign] : r.squarefree) total += sign * (m / d);
  return total;
}

// 4^{s+1} (2s - 1), the square of 2^{s+1} sqrt(2s-1)
Wide threshold_sq(int s) { return (Wide{1} << (2 * s + 2)) * (2 * s - 1); }

// smallest m with m >= 2^{s+1} sqrt(2s-1)
std::int64_t density_m_min(int s) {
  std::int64_t m = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(threshold_sq(s))))) - 2;
  if (m < 1) m = 1;
  while (Wide{m} * m < threshold_sq(s)) ++m;
  return m;
}

// t (2^{s+1} sqrt(2s-1) + 1) <= n + 1
bool fraction_t_ok(std::int64_t n, int s, std::int64_t t) {
  const Wide rest = Wide{n} + 1 - t;
  return rest >= 0 && Wide{t} * t * threshold_sq(s) <= rest * rest;
}

std::int64_t fraction_t_max(std::int64_t n, int s) {
  const double c = std::pow(2.0, s + 1) * std::sqrt(2.0 * s - 1);
  std::int64_t t = static_cast<std::int64_t>(static_cast<double>(n + 1) / (c + 1)) + 2;
  while (t > 0 && !fraction_t_ok(n, s, t)) --t;
  while (fraction_t_ok(n, s, t + 1)) ++t;
  return t;
}

bool density_holds(const Radical& r, std::int64_t m, std::int64_t phi_m) {
  return Wide{2} * r.n * phi_m >= Wide{m} * r.phi;
}

bool fraction_holds(const Radical& r, std::int64_t t, std::int64_t phi_nt) {
  // phi_{n/t}(n) >= phi(n) / (2.2 t)
  return Wide{22} * t * phi_nt >= Wide{10} * r.phi;
}

bool threshold_holds(std::int64_t n, int s) {
  const std::int64_t f = fraction_t_max(n, s);
  // f >= n / (2^{s+1} sqrt(2s)), squared
  return Wide{f} * f * (Wide{1} << (2 * s + 2)) * (2 * s) >= Wide{n} * n;
}

template <class PerN>
CheckReport totient_check(const char* name, const TotientCheckOptions& options, std::int64_t floor_n, PerN per_n,
                          const std::function<void(std::mt19937_64&, const Radical&, CheckReport&)>& random_point) {
  CheckReport rep{name};
  std::mutex mutex;
  const std::int64_t lo = std::max(options.lo, floor_n);
  const std::int64_t span = options.hi >= lo ? options.hi - lo + 1 : 0;
  parallel_for(options.parallel, static_cast<std::size_t>(span), [&](std::size_t i) {
    const std::int64_t n = lo + static_cast<std::int64_t>(i);
    if (omega_distinct_primes(n) < 2) return;
    CheckReport local{name};
    per_n(radical_of(n), local);
    std::lock_guard lock(mutex);
    rep.checked += local.checked;
    for (auto& v : local.violations) rep.fail(v);
  });
  std::mt19937_64 rng(options.seed);
  const std::int64_t rlo = std::max(floor_n, std::int64_t{6});
  if (options.random_hi > rlo) {
    std::uniform_int_distribution<std::int64_t> pick(rlo, options.random_hi);
    for (std::int64_t k = 0; k < options.random_points; ++k) {
      std::int64_t n = pick(rng);
      while (omega_distinct_primes(n) < 2) n = pick(rng);
      random_point(rng, radical_of(n), rep);
    }
  }
  return rep;
}

} // namespace

CheckReport check_totient_density(const TotientCheckOptions& options) {
  auto per_n = [](const Radical& r, CheckReport& rep) {
    const std::int64_t m_min = density_m_min(r.s);
    std::vector<char> coprime(r.n + 1, 1);
    for (auto [d, sign] : r.squarefree)
      if (sign == -1)
        for (std::int64_t k = d; k <= r.n; k += d) coprime[k] = 0;
    std::int64_t phi_m = 0;
    for (std::int64_t m = 1; m <= r.n; ++m) {
      phi_m += coprime[m];
      if (m < m_min) continue;
      ++rep.checked;
      if (!density_holds(r, m, phi_m)) rep.fail("n=" + std::to_string(r.n) + " m=" + std::to_string(m));
    }
  };
  auto random_point = [](std::mt19937_64& rng, const Radical& r, CheckReport& rep) {
    const std::int64_t m_min = density_m_min(r.s);
    if (m_min > r.n) return;
    const std::int64_t m = std::uniform_int_distribution<std::int64_t>(m_min, r.n)(rng);
    ++rep.checked;
    if (!density_holds(r, m, phi_upto(r, m))) rep.fail("n=" + std::to_string(r.n) + " m=" + std::to_string(m));
  };
  return totient_check("totient_density", options, 6, per_n, random_point);
}

CheckReport check_totient_fraction(const TotientCheckOptions& options) {
  auto per_n = [](const Radical& r, CheckReport& rep) {
    const std::int64_t t_max = fraction_t_max(r.n, r.s);
    for (std::int64_t t = 1; t <= t_max; ++t) {
      ++rep.checked;
      if (!fraction_holds(r, t, phi_upto(r, r.n / t))) rep.fail("n=" + std::to_string(r.n) + " t=" + std::to_string(t));
    }
  };
  auto random_point = [](std::mt19937_64& rng, const Radical& r, CheckReport& rep) {
    const std::int64_t t_max = fraction_t_max(r.n, r.s);
    if (t_max < 1) return;
    const std::int64_t t = std::uniform_int_distribution<std::int64_t>(1, t_max)(rng);
    ++rep.checked;
    if (!fraction_holds(r, t, phi_upto(r, r.n / t))) rep.fail("n=" + std::to_string(r.n) + " t=" + std::to_string(t));
  };
  return totient_check("totient_fraction", options, 6, per_n, random_point);
}

CheckReport check_totient_threshold(const TotientCheckOptions& options) {
  auto per_n = [](const Radical& r, CheckReport& rep) {
    ++rep.checked;
    if (!threshold_holds(r.n, r.s)) rep.fail("n=" + std::to_string(r.n));
  };
  auto random_point = [](std::mt19937_64&, const Radical& r, CheckReport& rep) {
    ++rep.checked;
    if (!threshold_holds(r.n, r.s)) rep.fail("n=" + std::to_string(r.n));
  };
  return totient_check("totient_threshold", options, 4376, per_n, random_point);
}

// ---------------------------------------------------------------------------

CheckReport check_sum_lemma(int trials, int max_len, std::uint64_t seed) {
  using Q = boost::multiprecision::cpp_rational;
  CheckReport rep{"harmonic_sum"};
  std::mt19937_64 rng(seed);
  auto check = [&](const std::vector<Q>& c, const Q& big_c, const std::string& label) {
    // c[i] for i in [2, M]; entries 0 and 1 unused
    const int top = static_cast<int>(c.size()) - 1;
    Q weighted = 0, plain = 0, harmonic = 1;
    for (int m = 2; m <= top; ++m) {
      weighted += Q(m) * c[m];
      plain += c[m];
      if (m >= 3) harmonic += Q(1, m);
      if (weighted > big_c * m) {
        rep.fail(label + ": generator broke the hypothesis at m=" + std::to_string(m));
        return;
      }
      ++rep.checked;
      if (plain > big_c * harmonic) rep.fail(label + ": conclusion fails at m=" + std::to_string(m));
    }
  };
  for (int trial = 0; trial < trials; ++trial) {
    const int top = std::uniform_int_distribution<int>(2, std::max(2, max_len))(rng);
    std::vector<Q> c(top + 1, Q(0));
    Q big_c;
    const int shape = trial % 4;
    if (shape == 0) {
      // c_i = C / i, the extremal shape
      big_c = Q(std::uniform_int_distribution<int>(1, 1000)(rng));
      for (int i = 2; i <= top; ++i) c[i] = big_c / i;
    } else {
      std::uniform_int_distribution<int> value(0, 1000);
      std::bernoulli_distribution sparse(shape == 1 ? 0.8 : 0.1);
      for (int i = 2; i <= top; ++i) c[i] = sparse(rng) ? Q(0) : Q(value(rng), 1 + value(rng) % 97);
      // smallest C satisfying the hypothesis
      Q weighted = 0;
      big_c = 0;
      for (int m = 2; m <= top; ++m) {
        weighted += Q(m) * c[m];
        big_c = std::max(big_c, Q(weighted / m));
      }
      if (shape == 3) big_c *= Q(std::uniform_int_distribution<int>(100, 300)(rng), 100);
    }
    check(c, big_c, "trial " + std::to_string(trial));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// elementary 2-groups

namespace {

GroupPtr elementary_two_group(int r) {
  if (r < 1 || r > 8) throw InvalidArgument("rank must lie in [1, 8]");
  return Group::make(GroupSpec::from_cyclic(std::vector<int>(r, 2)));
}

// zero-sum free sequences of length r over C_2^r, i.e. bases
std::vector<std::vector<Elem>> bases_of(const GroupPtr& group, int r) {
  std::vector<std::vector<Elem>> out;
  const auto g0 = nonzero_elements(*group);
  for_each_zero_sum_free(*group, g0, {}, [&](const std::vector<Elem>& terms, Elem, const ElementSet&) {
    if (static_cast<int>(terms.size()) == r) {
      out.push_back(terms);
      return false;
    }
    return true;
  });
  return out;
}

// Largest total length of at most max_k atoms whose product divides counts.
int best_packing(const AtomTable& table, std::vector<int>& counts, int max_k, std::size_t from, int goal) {
  if (max_k == 0) return 0;
  int best = 0;
  for (std::size_t i = from; i < table.sparse().size() && best < goal; ++i) {
    const SparseAtom& a = table.sparse()[i];
    bool fits = true;
    for (auto [g, c] : a.terms)
      if (counts[g] < c) fits = false;
    if (!fits) continue;
    for (auto [g, c] : a.terms) counts[g] -= c;
    best = std::max(best, a.length + best_packing(table, counts, max_k - 1, i, goal - a.length));
    for (auto [g, c] : a.terms) counts[g] += c;
  }
  return best;
}

} // namespace

CheckReport check_zero_sum_free_packing(int r, int samples, std::uint64_t seed) {
  CheckReport rep{"zero_sum_free_packing r=" + std::to_string(r)};
  const GroupPtr group = elementary_two_group(r);
  const TablePtr table = enumerate_atoms(group);
  const auto bases = bases_of(group, r);
  auto check = [&](const std::vector<int>& chosen) {
    const int l = static_cast<int>(chosen.size());
    std::vector<int> counts(group->size(), 0);
    for (int b : chosen)
      for (Elem g : bases[b]) ++counts[g];
    const int goal = 3 * (l - 1);
    ++rep.checked;
    if (best_packing(*table, counts, l - 1, 0, goal) < goal) {
      std::string what = "l=" + std::to_string(l) + " bases";
      for (int b : chosen) what += " " + std::to_string(b);
      rep.fail(what);
    }
  };
  if (samples == 0) {
    const int total = static_cast<int>(bases.size());
    for (int l = 1; l <= r + 1; ++l) {
      std::vector<int> pick(l);
      for (int i = 0; i < l; ++i) pick[i] = i;
      while (true) {
        check(pick);
        int i = l - 1;
        while (i >= 0 && pick[i] == total - l + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int k = i + 1; k < l; ++k) pick[k] = pick[k - 1] + 1;
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::vector<int> all(bases.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    for (int k = 0; k < samples; ++k) {
      const int l = std::uniform_int_distribution<int>(1, r + 1)(rng);
      std::shuffle(all.begin(), all.end(), rng);
      check(std::vector<int>(all.begin(), all.begin() + l));
    }
  }
  return rep;
}

CheckReport check_cover_length_bound(int r, int samples, std::uint64_t seed) {
  if (r < 3) throw HypothesisError("check_cover_length_bound: needs r >= 3");
  CheckReport rep("cover_length_bound r=" + std::to_string(r));
  const GroupPtr group = elementary_two_group(r);
  const TablePtr table = enumerate_atoms(group);
  std::vector<int> atoms;
  for (int i = 0; i < table->size(); ++i)
    if (table->atom(i).length() >= 3) atoms.push_back(i);
  auto check = [&](const CoverConfig& c) {
    ++rep.checked;
    if (2 * *c.min_len_w > c.m() * (r - 1) + 1)
      rep.fail("U=" + c.u.to_string() + " m=" + std::to_string(c.m()) + " minL=" + std::to_string(*c.min_len_w));
  };
  if (samples == 0) {
    for (int idx : atoms)
      for (const CoverConfig& c : enumerate_minimal_covers(table->atom(idx), table, table->atom(idx).length()))
        if (c.m() >= 3) check(c);
    return rep;
  }
  // Random covers: split U into m >= 3 parts, extend each part to a random
  // atom containing it, keep the result when it is a minimal cover.
  std::mt19937_64 rng(seed);
  int found = 0;
  for (long attempt = 0; found < samples && attempt < 200L * samples; ++attempt) {
    const Sequence& u = table->atom(atoms[std::uniform_int_distribution<std::size_t>(0, atoms.size() - 1)(rng)]);
    std::vector<Elem> terms = u.terms();
    std::shuffle(terms.begin(), terms.end(), rng);
    const int m = std::uniform_int_distribution<int>(3, u.length())(rng);
    std::vector<std::vector<Elem>> parts(m);
    for (std::size_t i = 0; i < terms.size(); ++i)
      parts[i < static_cast<std::size_t>(m) ? i : std::uniform_int_distribution<int>(0, m - 1)(rng)].push_back(terms[i]);
    std::vector<Sequence> covers;
    for (const auto& part : parts) {
      const Sequence s = Sequence::from_terms(group, part);
      std::vector<int> options;
      for (int v : table->containing(part.front()))
        if (divides(s, table->atom(v))) options.push_back(v);
      covers.push_back(table->atom(options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)]));
    }
    const CoverConfig c = make_cover(u, covers);
    if (!verify_cover(c).ok) continue;
    ++found;
    check(c);
  }
  if (found < samples) rep.fail("only " + std::to_string(found) + " random minimal covers found");
  return rep;
}

} // namespace zslab
