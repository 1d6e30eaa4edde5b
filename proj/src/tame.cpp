#include "zslab/tame.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "cover_search.hpp"
#include "zslab/error.hpp"
#include "zslab/symmetry.hpp"

// The tame degree of an atom U is the largest max{m, 1 + min L(W)} over its
// minimal covers. The supremum is a maximum: a minimal cover has m <= |U|
// atoms, each of length <= D, so there are finitely many covers.

namespace zslab {

nlohmann::json CoverConfig::to_json() const {
  nlohmann::json j;
  j["U"] = sequence_to_json(u);
  j["covers"] = nlohmann::json::array();
  for (const auto& v : covers) j["covers"].push_back(sequence_to_json(v));
  j["W"] = sequence_to_json(w);
  j["m"] = m();
  if (min_len_w) j["min_len_W"] = *min_len_w;
  if (value) j["value"] = *value;
  return j;
}

CoverConfig CoverConfig::from_json(const GroupPtr& group, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("U") || !j.contains("covers"))
    throw InvalidArgument("cover JSON needs an object with U and covers");
  CoverConfig c;
  c.u = sequence_from_json(group, j.at("U"));
  for (const auto& v : j.at("covers")) c.covers.push_back(sequence_from_json(group, v));
  c.w = j.contains("W") ? sequence_from_json(group, j.at("W")) : Sequence(group);
  if (j.contains("min_len_W")) c.min_len_w = j.at("min_len_W").get<int>();
  if (j.contains("value")) c.value = j.at("value").get<int>();
  return c;
}

namespace {

Sequence product_of(const GroupPtr& group, const std::vector<Sequence>& xs) {
  Sequence p(group);
  for (const auto& x : xs) p = p.times(x);
  return p;
}

int min_len_local(const Sequence& w) {
  if (w.empty()) return 0;
  return min_length(w, atoms_dividing(w));
}

} // namespace

CoverConfig make_cover(const Sequence& u, std::vector<Sequence> covers) {
  CoverConfig c;
  c.u = u;
  c.covers = std::move(covers);
  const Sequence prod = product_of(u.group(), c.covers);
  if (!divides(u, prod)) throw InvalidArgument("U does not divide the product of the covering atoms");
  c.w = prod.over(u);
  c.min_len_w = min_len_local(c.w);
  c.value = std::max(c.m(), 1 + *c.min_len_w);
  return c;
}

CoverVerdict verify_cover(const CoverConfig& c) {
  CoverVerdict out;
  auto fail = [&](std::string msg) {
    out.ok = false;
    out.problems.push_back(std::move(msg));
  };
  if (!is_minimal_zero_sum(c.u)) fail("U is not an atom");
  for (std::size_t i = 0; i < c.covers.size(); ++i) {
    if (c.covers[i].group()->spec() != c.u.group()->spec()) {
      fail("cover " + std::to_string(i) + " is over another group");
      return out;
    }
    if (!is_minimal_zero_sum(c.covers[i])) fail("cover " + std::to_string(i) + " is not an atom");
  }
  const Sequence prod = product_of(c.u.group(), c.covers);
  if (!divides(c.u, prod)) {
    fail("U does not divide the product");
    return out;
  }
  for (std::size_t i = 0; i < c.covers.size(); ++i) {
    std::vector<Sequence> rest;
    for (std::size_t j = 0; j < c.covers.size(); ++j)
      if (j != i) rest.push_back(c.covers[j]);
    if (c.covers.size() > 1 && divides(c.u, product_of(c.u.group(), rest)))
      fail("U divides the subproduct without cover " + std::to_string(i));
  }
  if (c.m() > c.u.length()) fail("more covering atoms than terms of U");
  if (!(c.w == prod.over(c.u))) fail("W is not U^-1 times the product");
  const int ml = min_len_local(prod.over(c.u));
  if (c.min_len_w && *c.min_len_w != ml) fail("min L(W) is " + std::to_string(ml) + ", claimed " + std::to_string(*c.min_len_w));
  if (c.value && *c.value != std::max(c.m(), 1 + ml))
    fail("value is " + std::to_string(std::max(c.m(), 1 + ml)) + ", claimed " + std::to_string(*c.value));
  return out;
}

TablePtr table_for(const GroupSpec& group, const SearchOptions& options) {
  const auto g = Group::make(group);
  if (!options.cache_dir.empty()) return AtomCache(options.cache_dir, options.parallel).get(g);
  AtomOptions ao;
  ao.parallel = options.parallel;
  return enumerate_atoms(g, nonzero_elements(*g), ao);
}

namespace {

using detail::CoverCandidate;
using detail::CoverProblem;
using detail::CoverSearch;

void check_atom_of(const Sequence& u, const AtomTable& table) {
  if (u.group()->spec() != table.group()->spec()) throw InvalidArgument("U and the atom table are over different groups");
  if (!table.find(u)) throw InvalidArgument("not an atom of the table: " + u.to_string());
}

// Parts of U are sub-multisets; a part S is extended by an atom V with
// S | V, contributing V S^-1 to W.
struct AtomCoverProblem {
  CoverProblem problem;
  std::vector<Elem> tracked;  // supp(U)
};

AtomCoverProblem atom_cover_problem(const Sequence& u, const AtomTable& table, int min_parts, int max_parts,
                                    bool count_parts, bool require_minimal) {
  AtomCoverProblem out;
  out.tracked = u.support();
  std::vector<Count> need;
  for (Elem g : out.tracked) need.push_back(static_cast<Count>(u.multiplicity(g)));
  out.problem.need = need;
  out.problem.count_parts = count_parts;
  out.problem.require_minimal = require_minimal;

  std::map<std::vector<Count>, int> part_id;
  for (auto& parts : detail::multiset_partitions(need, min_parts)) {
    if (static_cast<int>(parts.size()) > max_parts) continue;
    std::vector<int> ids;
    for (auto& p : parts) {
      auto [it, fresh] = part_id.emplace(p, static_cast<int>(part_id.size()));
      if (fresh) {
        std::vector<CoverCandidate> cands;
        std::size_t first = 0;
        while (p[first] == 0) ++first;
        for (int idx : table.containing(out.tracked[first])) {
          const Sequence& v = table.atom(idx);
          bool fits = true;
          for (std::size_t k = 0; k < p.size() && fits; ++k) fits = v.multiplicity(out.tracked[k]) >= p[k];
          if (!fits) continue;
          CoverCandidate c;
          c.id = idx;
          for (Elem g : v.support()) {
            int extra = v.multiplicity(g);
            for (std::size_t k = 0; k < p.size(); ++k)
              if (out.tracked[k] == g) extra -= p[k];
            if (extra > 0) c.extra.emplace_back(g, static_cast<Count>(extra));
            c.extra_length += extra;
          }
          for (Elem g : out.tracked) c.tag.push_back(static_cast<Count>(v.multiplicity(g)));
          cands.push_back(std::move(c));
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [](const CoverCandidate& a, const CoverCandidate& b) { return a.extra_length > b.extra_length; });
        out.problem.candidates.push_back(std::move(cands));
      }
      ids.push_back(it->second);
    }
    out.problem.partitions.push_back(std::move(ids));
  }
  return out;
}

CoverConfig cover_from_hit(const Sequence& u, const AtomTable& table, const CoverProblem& problem, const detail::CoverHit& hit) {
  std::vector<Sequence> covers;
  const auto& parts = problem.partitions[hit.partition];
  for (std::size_t i = 0; i < parts.size(); ++i) covers.push_back(table.atom(problem.candidates[parts[i]][hit.choice[i]].id));
  CoverConfig c;
  c.u = u;
  c.covers = covers;
  c.w = product_of(u.group(), covers).over(u);
  c.min_len_w = hit.min_len;
  c.value = hit.value;
  return c;
}

nlohmann::json frontier_json(const AtomTable& table, const std::vector<int>& atoms) {
  nlohmann::json j = nlohmann::json::array();
  for (int idx : atoms) j.push_back(sequence_to_json(table.atom(idx)));
  return j;
}

std::vector<int> ordered_representatives(const AtomTable& table, const SearchOptions& options, int min_length) {
  const auto maps = random_automorphisms(*table.group(), options.automorphism_samples);
  const AtomOrbits orbits = atom_orbits(table, maps);
  std::vector<int> reps;
  for (int r : orbits.representatives)
    if (table.atom(r).length() >= min_length) reps.push_back(r);
  std::stable_sort(reps.begin(), reps.end(), [&](int a, int b) { return table.atom(a).length() > table.atom(b).length(); });
  return reps;
}

struct RunState {
  MonotoneMax best{0};
  std::mutex mutex;
  std::optional<CoverConfig> best_cover;
};

// Drives one problem per representative atom, in order, sharing the running
// maximum. On budget exhaustion throws PartialResult.
template <class MakeProblem, class ToCover>
TameResult run_over_atoms(const AtomTable& table, LengthEngine& engine, const std::vector<int>& reps, int ceiling,
                          const SearchOptions& options, const char* what, MakeProblem make_problem, ToCover to_cover) {
  TameResult result;
  result.atoms_total = table.size();
  RunState state;
  Budget budget(options.budget_seconds);
  std::size_t next = 0;
  for (; next < reps.size(); ++next) {
    if (state.best.get() >= ceiling) break;
    const Sequence& u = table.atom(reps[next]);
    const CoverProblem problem = make_problem(u);
    CoverSearch search(problem, engine, budget);
    if (search.ceiling() <= state.best.get()) continue;
    ++result.atoms_searched;
    search.improve(state.best, options.parallel, [&](const detail::CoverHit& hit) {
      std::lock_guard lock(state.mutex);
      if (!state.best_cover || *state.best_cover->value < hit.value) state.best_cover = to_cover(u, problem, hit);
    });
    if (budget.stopped()) break;
  }
  if (budget.stopped()) {
    std::vector<int> frontier(reps.begin() + static_cast<std::ptrdiff_t>(next), reps.end());
    throw PartialResult(std::string(what) + ": time budget exhausted", state.best.get(),
                        state.best_cover ? state.best_cover->to_json() : nlohmann::json(), frontier_json(table, frontier));
  }
  result.value = state.best.get();
  if (result.value == 0) return result;
  // Deterministic certificate: the first cover reaching the value in the
  // sequential search order.
  Budget unlimited;
  for (int r : reps) {
    const Sequence& u = table.atom(r);
    const CoverProblem problem = make_problem(u);
    CoverSearch search(problem, engine, unlimited);
    if (search.ceiling() < result.value) continue;
    if (auto hit = search.first_at_least(result.value)) {
      result.certificate = to_cover(u, problem, *hit);
      break;
    }
  }
  return result;
}

std::vector<std::vector<Sequence>> zero_sum_free_by_sum(const AtomTable& table) {
  const Group& group = *table.group();
  std::vector<std::vector<Sequence>> out(group.size());
  for_each_zero_sum_free(group, table.g0(), {}, [&](const std::vector<Elem>& terms, Elem sum, const ElementSet&) {
    if (!terms.empty()) out[sum].push_back(Sequence::from_terms(table.group(), terms));
    return true;
  });
  return out;
}

} // namespace

std::vector<CoverConfig> enumerate_minimal_covers(const Sequence& u, const TablePtr& table, int max_m) {
  check_atom_of(u, *table);
  const auto acp = atom_cover_problem(u, *table, 1, max_m, true, true);
  LengthEngine engine(table);
  Budget budget;
  CoverSearch search(acp.problem, engine, budget);
  std::set<std::vector<int>> seen;
  std::vector<CoverConfig> out;
  search.for_each([&](const detail::CoverHit& hit) {
    std::vector<int> ids;
    const auto& parts = acp.problem.partitions[hit.partition];
    for (std::size_t i = 0; i < parts.size(); ++i) ids.push_back(acp.problem.candidates[parts[i]][hit.choice[i]].id);
    std::sort(ids.begin(), ids.end());
    if (seen.insert(ids).second) out.push_back(cover_from_hit(u, *table, acp.problem, hit));
  });
  return out;
}

int omega_local(const Sequence& u, const TablePtr& table) {
  check_atom_of(u, *table);
  // Partitions come with the most parts first, so the first minimal cover
  // found has the largest m.
  const auto acp = atom_cover_problem(u, *table, 2, u.length(), true, true);
  LengthEngine engine(table);
  Budget budget;
  CoverSearch search(acp.problem, engine, budget);
  const auto hit = search.first_at_least(0);
  return hit ? static_cast<int>(acp.problem.partitions[hit->partition].size()) : 1;
}

TameResult t_local(const Sequence& u, const TablePtr& table, const SearchOptions& options) {
  check_atom_of(u, *table);
  LengthEngine engine(table);
  const int idx = *table->find(u);
  // one cover of U by itself has m = 1; U is prime iff nothing else exists
  return run_over_atoms(
      *table, engine, {idx}, 1 << 30, options, "t_local",
      [&](const Sequence& x) { return atom_cover_problem(x, *table, 2, x.length(), true, true).problem; },
      [&](const Sequence& x, const CoverProblem& p, const detail::CoverHit& h) { return cover_from_hit(x, *table, p, h); });
}

TameResult t_global(const TablePtr& table, const SearchOptions& options) {
  if (!table->full_support()) throw InvalidArgument("t_global needs the full atom table of the group");
  LengthEngine engine(table);
  const int d = table->davenport();
  const auto reps = ordered_representatives(*table, options, 2);
  return run_over_atoms(
      *table, engine, reps, 1 + d * (d - 1) / 2, options, "t_global",
      [&](const Sequence& x) { return atom_cover_problem(x, *table, 2, x.length(), true, true).problem; },
      [&](const Sequence& x, const CoverProblem& p, const detail::CoverHit& h) { return cover_from_hit(x, *table, p, h); });
}

TameResult t_global(const GroupSpec& group, const SearchOptions& options) {
  if (group.cardinality() == 1) return {};
  return t_global(table_for(group, options), options);
}

TameResult t_krull_local(const Sequence& u, const TablePtr& table, const SearchOptions& options) {
  check_atom_of(u, *table);
  if (table->davenport() <= 2) throw HypothesisError("needs D(G) > 2, got D = " + std::to_string(table->davenport()));
  if (u.length() < 3) throw HypothesisError("needs |U| >= 3, got |U| = " + std::to_string(u.length()));
  LengthEngine engine(table);
  const int idx = *table->find(u);
  TameResult r = run_over_atoms(
      *table, engine, {idx}, 1 << 30, options, "t_krull_local",
      [&](const Sequence& x) { return atom_cover_problem(x, *table, 2, x.length(), false, false).problem; },
      [&](const Sequence& x, const CoverProblem& p, const detail::CoverHit& h) { return cover_from_hit(x, *table, p, h); });
  r.value = std::max(r.value, u.length());
  return r;
}

TameResult t_krull(const TablePtr& table, const SearchOptions& options) {
  if (!table->full_support()) throw InvalidArgument("t_krull needs the full atom table of the group");
  const int d = table->davenport();
  TameResult r;
  r.atoms_total = table->size();
  if (table->group()->size() == 2) {
    // the formula needs D > 2; for C2 the value is known directly
    r.value = 2;
    return r;
  }
  const auto by_sum = zero_sum_free_by_sum(*table);
  // Parts are the single terms g of an atom U' = g_1...g_m; the extension of
  // g is a zero-sum free A with sigma(A) = g.
  std::map<Elem, std::vector<CoverCandidate>> cache;
  auto candidates = [&](Elem g) -> const std::vector<CoverCandidate>& {
    auto it = cache.find(g);
    if (it != cache.end()) return it->second;
    std::vector<CoverCandidate> cands;
    for (std::size_t i = 0; i < by_sum[g].size(); ++i) {
      const Sequence& a = by_sum[g][i];
      CoverCandidate c;
      c.id = static_cast<int>(i);
      for (Elem x : a.support()) c.extra.emplace_back(x, static_cast<Count>(a.multiplicity(x)));
      c.extra_length = a.length();
      cands.push_back(std::move(c));
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const CoverCandidate& x, const CoverCandidate& y) { return x.extra_length > y.extra_length; });
    return cache.emplace(g, std::move(cands)).first->second;
  };
  auto make_problem = [&](const Sequence& u) {
    CoverProblem p;
    p.count_parts = false;
    p.require_minimal = false;
    std::vector<int> ids;
    std::map<Elem, int> id_of;
    for (Elem g : u.terms()) {
      auto [it, fresh] = id_of.emplace(g, static_cast<int>(p.candidates.size()));
      if (fresh) p.candidates.push_back(candidates(g));
      ids.push_back(it->second);
    }
    p.partitions.push_back(ids);
    return p;
  };
  auto to_cover = [&](const Sequence& u, const CoverProblem& p, const detail::CoverHit& h) {
    // not a minimal cover: covers holds A_1..A_m and W their product
    CoverConfig c;
    c.u = u;
    c.w = Sequence(u.group());
    const auto& parts = p.partitions[h.partition];
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto& cand = p.candidates[parts[i]][h.choice[i]];
      Sequence a(u.group());
      for (auto [x, n] : cand.extra) a.add(x, n);
      c.covers.push_back(a);
      c.w = c.w.times(a);
    }
    c.min_len_w = h.min_len;
    c.value = h.value;
    return c;
  };
  LengthEngine engine(table);
  const auto reps = ordered_representatives(*table, options, 2);
  r = run_over_atoms(*table, engine, reps, 1 << 30, options, "t_krull", make_problem, to_cover);
  r.value = std::max(r.value, d);
  return r;
}

TameResult t_krull(const GroupSpec& group, const SearchOptions& options) {
  if (group.cardinality() == 1) return {};
  return t_krull(table_for(group, options), options);
}

} // namespace zslab
