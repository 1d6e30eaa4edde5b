#include "zslab/krull_model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "cover_search.hpp"
#include "zslab/error.hpp"

namespace zslab {

KrullModel KrullModel::make(GroupPtr group, const std::vector<std::pair<Elem, int>>& class_counts) {
  KrullModel m;
  m.group_ = std::move(group);
  m.primes_in_.assign(m.group_->size(), {});
  std::map<Elem, int> merged;
  for (auto [cls, count] : class_counts) {
    if (cls >= static_cast<Elem>(m.group_->size())) throw InvalidArgument("class outside the group");
    if (cls == Group::zero())
      throw InvalidArgument("primes in the trivial class are prime elements of the monoid and are not modelled");
    if (count < 0) throw InvalidArgument("negative prime count");
    merged[cls] += count;
  }
  for (auto [cls, count] : merged)
    for (int k = 0; k < count; ++k) {
      m.primes_in_[cls].push_back(static_cast<int>(m.class_of_.size()));
      m.class_of_.push_back(cls);
    }
  for (auto [cls, count] : merged)
    if (count > 0) m.classes_.push_back(cls);
  if (m.classes_.empty()) throw InvalidArgument("model has no primes");
  return m;
}

KrullModel KrullModel::from_json(const nlohmann::json& j) {
  const auto group = Group::make(GroupSpec::parse(j.at("group").get<std::string>()));
  std::vector<std::pair<Elem, int>> counts;
  for (const auto& p : j.at("primes")) {
    const auto coords = p.at("class").get<std::vector<int>>();
    counts.emplace_back(group->index(GroupElement{coords}), p.value("count", 1));
  }
  return make(group, counts);
}

nlohmann::json KrullModel::to_json() const {
  nlohmann::json j;
  j["group"] = group_->spec().to_string();
  j["primes"] = nlohmann::json::array();
  for (Elem c : classes_) j["primes"].push_back({{"class", group_->element(c).coords}, {"count", primes_in_[c].size()}});
  return j;
}

const TablePtr& KrullModel::block_table() const {
  std::call_once(lazy_->once, [this] { lazy_->table = enumerate_atoms(group_, classes_); });
  return lazy_->table;
}

PSequence PSequence::from_primes(const KrullModel& model, const std::vector<int>& primes) {
  PSequence s;
  s.counts.assign(model.prime_count(), 0);
  for (int p : primes) {
    if (p < 0 || p >= model.prime_count()) throw InvalidArgument("unknown prime index " + std::to_string(p));
    ++s.counts[p];
  }
  return s;
}

int PSequence::length() const {
  int n = 0;
  for (Count c : counts) n += c;
  return n;
}

std::vector<int> PSequence::support() const {
  std::vector<int> out;
  for (std::size_t p = 0; p < counts.size(); ++p)
    if (counts[p]) out.push_back(static_cast<int>(p));
  return out;
}

nlohmann::json PSequence::to_json(const KrullModel& model) const {
  nlohmann::json j = nlohmann::json::array();
  for (int p : support()) j.push_back({model.prime_name(p), counts[p]});
  return j;
}

Sequence block_image(const PSequence& s, const KrullModel& model) {
  Sequence out(model.group());
  for (int p : s.support()) out.add(model.class_of(p), s.counts[p]);
  return out;
}

bool is_h_atom(const PSequence& s, const KrullModel& model) { return is_minimal_zero_sum(block_image(s, model)); }

bool p_divides(const PSequence& a, const PSequence& b) {
  for (std::size_t p = 0; p < a.counts.size(); ++p)
    if (a.counts[p] > b.counts[p]) return false;
  return true;
}

namespace {

PSequence over(const PSequence& a, const PSequence& b) {
  PSequence out = a;
  for (std::size_t p = 0; p < out.counts.size(); ++p) out.counts[p] = static_cast<Count>(out.counts[p] - b.counts[p]);
  return out;
}

PSequence product(const KrullModel& model, const std::vector<PSequence>& xs) {
  PSequence out;
  out.counts.assign(model.prime_count(), 0);
  for (const auto& x : xs)
    for (std::size_t p = 0; p < out.counts.size(); ++p) out.counts[p] = static_cast<Count>(out.counts[p] + x.counts[p]);
  return out;
}

// All ways to write k as an ordered sum over n slots.
void compositions(int k, int n, std::vector<int>& cur, const std::function<void()>& fn) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(k);
    fn();
    cur.pop_back();
    return;
  }
  for (int x = k; x >= 0; --x) {
    cur.push_back(x);
    compositions(k - x, n, cur, fn);
    cur.pop_back();
  }
}

// Non-increasing sums of k over at most n slots.
void partitions_into(int k, int n, int cap, std::vector<int>& cur, const std::function<void()>& fn) {
  if (k == 0) {
    fn();
    return;
  }
  if (static_cast<int>(cur.size()) == n) return;
  for (int x = std::min(k, cap); x >= 1; --x) {
    cur.push_back(x);
    partitions_into(k - x, n, x, cur, fn);
    cur.pop_back();
  }
}

// Every coloring of a block sequence by primes, one per class choice.
// spread(cls, k) yields the candidate distributions of k copies of cls.
void colorings(const KrullModel& model, const Sequence& block,
               const std::function<void(Elem, int, const std::function<void(const std::vector<int>&)>&)>& spread,
               const std::function<void(const PSequence&)>& fn) {
  const auto classes = block.support();
  PSequence cur;
  cur.counts.assign(model.prime_count(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == classes.size()) {
      fn(cur);
      return;
    }
    const Elem cls = classes[i];
    const auto& primes = model.primes_in(cls);
    spread(cls, block.multiplicity(cls), [&](const std::vector<int>& dist) {
      for (std::size_t j = 0; j < dist.size(); ++j) cur.counts[primes[j]] = static_cast<Count>(cur.counts[primes[j]] + dist[j]);
      rec(i + 1);
      for (std::size_t j = 0; j < dist.size(); ++j) cur.counts[primes[j]] = static_cast<Count>(cur.counts[primes[j]] - dist[j]);
    });
  };
  rec(0);
}

} // namespace

int min_length_h(const PSequence& w, const KrullModel& model) {
  const Sequence img = block_image(w, model);
  if (img.empty()) return 0;
  return min_length(img, model.block_table());
}

int min_length_h_direct(const PSequence& w, const KrullModel& model) {
  if (w.length() > 10) throw InvalidArgument("direct model factorization is limited to 10 primes");
  if (sigma(block_image(w, model)) != Group::zero()) throw InvalidArgument("not an element of the model");
  // Branch on the atoms through the least remaining prime; every
  // sub-multiset is tried, so nothing is taken from the class map's side.
  std::function<int(PSequence&)> rec = [&](PSequence& rest) -> int {
    const auto supp = rest.support();
    if (supp.empty()) return 0;
    const int least = supp.front();
    int best = 1 << 20;
    PSequence sub;
    sub.counts.assign(rest.counts.size(), 0);
    std::function<void(std::size_t)> pick = [&](std::size_t i) {
      if (i == supp.size()) {
        if (sub.counts[least] == 0 || !is_h_atom(sub, model)) return;
        PSequence next = over(rest, sub);
        best = std::min(best, 1 + rec(next));
        return;
      }
      for (int k = 0; k <= rest.counts[supp[i]]; ++k) {
        sub.counts[supp[i]] = static_cast<Count>(k);
        pick(i + 1);
      }
      sub.counts[supp[i]] = 0;
    };
    pick(0);
    return best;
  };
  PSequence copy = w;
  return rec(copy);
}

std::vector<PSequence> h_atoms(const KrullModel& model, std::size_t limit) {
  std::vector<PSequence> out;
  for (const auto& block : model.block_table()->atoms()) {
    colorings(
        model, block,
        [&](Elem cls, int k, const std::function<void(const std::vector<int>&)>& emit) {
          std::vector<int> cur;
          compositions(k, static_cast<int>(model.primes_in(cls).size()), cur, [&] { emit(cur); });
        },
        [&](const PSequence& s) {
          out.push_back(s);
          if (out.size() > limit) throw ResourceLimit("more than " + std::to_string(limit) + " model atoms");
        });
  }
  return out;
}

std::vector<PSequence> h_atom_representatives(const KrullModel& model) {
  std::vector<PSequence> out;
  for (const auto& block : model.block_table()->atoms()) {
    colorings(
        model, block,
        [&](Elem cls, int k, const std::function<void(const std::vector<int>&)>& emit) {
          std::vector<int> cur;
          partitions_into(k, static_cast<int>(model.primes_in(cls).size()), k, cur, [&] { emit(cur); });
        },
        [&](const PSequence& s) { out.push_back(s); });
  }
  return out;
}

nlohmann::json ModelHypotheses::to_json() const {
  return {{"symmetric_classes", symmetric_classes}, {"all_classes", all_classes},
          {"min_primes_per_class", min_primes_per_class}, {"saturated", saturated},
          {"divisor_theory", divisor_theory}, {"notes", notes}};
}

ModelHypotheses model_hypotheses(const KrullModel& model) {
  ModelHypotheses h;
  const Group& g = *model.group();
  const auto& classes = model.classes();
  auto has = [&](Elem c) { return !model.primes_in(c).empty(); };
  h.symmetric_classes = std::all_of(classes.begin(), classes.end(), [&](Elem c) { return has(g.neg(c)); });
  h.all_classes = static_cast<int>(classes.size()) == g.size() - 1;
  h.min_primes_per_class = 1 << 30;
  for (Elem c : classes) h.min_primes_per_class = std::min<int>(h.min_primes_per_class, model.primes_in(c).size());
  const auto& table = *model.block_table();
  h.saturated = h.min_primes_per_class >= table.davenport() + 1;

  // A prime p of class c is the gcd of the atoms it divides iff some such
  // atom has p exactly once and, for every other prime q, some such atom
  // avoids q. Copies of c can be moved to another prime of c, and a
  // different class d can be dodged by recoloring unless d has one prime.
  h.divisor_theory = true;
  for (Elem c : classes) {
    const auto& through = table.containing(c);
    bool single = model.primes_in(c).size() > 1;
    for (int idx : through) single = single || table.atom(idx).multiplicity(c) == 1;
    if (!single) {
      h.divisor_theory = false;
      h.notes.push_back("class " + g.format(c) + ": every element through its prime holds it at least twice");
    }
    for (Elem d : classes) {
      if (d == c || model.primes_in(d).size() > 1) continue;
      const bool avoidable = std::any_of(through.begin(), through.end(),
                                         [&](int idx) { return table.atom(idx).multiplicity(d) == 0; });
      if (!avoidable) {
        h.divisor_theory = false;
        h.notes.push_back("class " + g.format(c) + ": every element through its prime also holds the prime of class " +
                          g.format(d));
      }
    }
  }
  return h;
}

nlohmann::json ModelCover::to_json(const KrullModel& model) const {
  nlohmann::json j;
  j["u"] = u.to_json(model);
  j["covers"] = nlohmann::json::array();
  for (const auto& v : covers) j["covers"].push_back(v.to_json(model));
  j["w"] = w.to_json(model);
  j["m"] = covers.size();
  j["min_len_w"] = min_len_w;
  j["value"] = value;
  return j;
}

ModelCover make_model_cover(const PSequence& u, std::vector<PSequence> covers, const KrullModel& model) {
  ModelCover c;
  c.u = u;
  c.covers = std::move(covers);
  const PSequence prod = product(model, c.covers);
  if (!p_divides(u, prod)) throw InvalidArgument("u does not divide the product of the covering atoms");
  c.w = over(prod, u);
  c.min_len_w = min_length_h(c.w, model);
  c.value = std::max(static_cast<int>(c.covers.size()), 1 + c.min_len_w);
  return c;
}

CoverVerdict verify_model_cover(const ModelCover& c, const KrullModel& model) {
  CoverVerdict out;
  auto fail = [&](std::string msg) {
    out.ok = false;
    out.problems.push_back(std::move(msg));
  };
  if (!is_h_atom(c.u, model)) fail("u is not an atom of the model");
  for (std::size_t i = 0; i < c.covers.size(); ++i)
    if (!is_h_atom(c.covers[i], model)) fail("cover " + std::to_string(i) + " is not an atom of the model");
  const PSequence prod = product(model, c.covers);
  if (!p_divides(c.u, prod)) {
    fail("u does not divide the product");
    return out;
  }
  for (std::size_t i = 0; i < c.covers.size() && c.covers.size() > 1; ++i)
    if (p_divides(c.u, over(prod, c.covers[i]))) fail("u divides the subproduct without cover " + std::to_string(i));
  const PSequence w = over(prod, c.u);
  if (!(w == c.w)) fail("w is not u^-1 times the product");
  const int ml = min_length_h(w, model);
  if (ml != c.min_len_w) fail("min L(w) is " + std::to_string(ml));
  if (c.value != std::max(static_cast<int>(c.covers.size()), 1 + ml)) fail("value mismatch");
  return out;
}

namespace {

using detail::CoverCandidate;
using detail::CoverProblem;

// The value of a cover depends on the covering atoms only through their
// class images, and a prime outside u never affects minimality. So each
// extra class copy goes to one prime outside u when its class has one;
// only classes whose primes all lie in u are distributed over u's primes.
struct ModelProblem {
  CoverProblem problem;
  std::vector<PSequence> realized;  // candidate id -> model atom
};

ModelProblem model_problem(const PSequence& u, const KrullModel& model) {
  ModelProblem out;
  const auto tracked = u.support();
  for (int p : tracked) out.problem.need.push_back(u.counts[p]);
  const TablePtr& table = model.block_table();
  const Group& g = *model.group();

  std::vector<int> fresh(g.size(), -1);
  for (Elem c : model.classes())
    for (int p : model.primes_in(c))
      if (u.counts[p] == 0) {
        fresh[c] = p;
        break;
      }

  std::map<std::vector<Count>, int> part_id;
  for (auto& parts : detail::multiset_partitions(out.problem.need, 2)) {
    std::vector<int> ids;
    for (auto& part : parts) {
      auto [it, is_new] = part_id.emplace(part, static_cast<int>(part_id.size()));
      if (is_new) {
        PSequence s;
        s.counts.assign(model.prime_count(), 0);
        for (std::size_t k = 0; k < tracked.size(); ++k) s.counts[tracked[k]] = part[k];
        const Sequence img = block_image(s, model);
        std::vector<CoverCandidate> cands;
        for (int idx : table->containing(img.support().front())) {
          const Sequence& block = table->atom(idx);
          if (!divides(img, block)) continue;
          const Sequence extra = block.over(img);
          colorings(
              model, extra,
              [&](Elem cls, int k, const std::function<void(const std::vector<int>&)>& emit) {
                const auto& primes = model.primes_in(cls);
                if (fresh[cls] >= 0) {
                  std::vector<int> dist(primes.size(), 0);
                  dist[std::find(primes.begin(), primes.end(), fresh[cls]) - primes.begin()] = k;
                  emit(dist);
                  return;
                }
                std::vector<int> cur;
                compositions(k, static_cast<int>(primes.size()), cur, [&] { emit(cur); });
              },
              [&](const PSequence& colored) {
                PSequence v = colored;
                for (std::size_t p = 0; p < v.counts.size(); ++p) v.counts[p] = static_cast<Count>(v.counts[p] + s.counts[p]);
                CoverCandidate c;
                c.id = static_cast<int>(out.realized.size());
                for (Elem x : extra.support()) c.extra.emplace_back(x, static_cast<Count>(extra.multiplicity(x)));
                c.extra_length = extra.length();
                for (int p : tracked) c.tag.push_back(v.counts[p]);
                out.realized.push_back(std::move(v));
                cands.push_back(std::move(c));
              });
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

ModelCover cover_from_hit(const PSequence& u, const KrullModel& model, const ModelProblem& mp, const detail::CoverHit& hit) {
  std::vector<PSequence> covers;
  const auto& parts = mp.problem.partitions[hit.partition];
  for (std::size_t i = 0; i < parts.size(); ++i)
    covers.push_back(mp.realized[mp.problem.candidates[parts[i]][hit.choice[i]].id]);
  ModelCover c;
  c.u = u;
  c.covers = covers;
  c.w = over(product(model, covers), u);
  c.min_len_w = hit.min_len;
  c.value = hit.value;
  return c;
}

ModelResult run_model(const std::vector<PSequence>& atoms, const KrullModel& model, const SearchOptions& options,
                      const char* what) {
  ModelResult result;
  LengthEngine engine(model.block_table());
  Budget budget(options.budget_seconds);
  MonotoneMax best(0);
  std::mutex mutex;
  std::optional<ModelCover> best_cover;
  std::size_t next = 0;
  for (; next < atoms.size(); ++next) {
    const ModelProblem mp = model_problem(atoms[next], model);
    detail::CoverSearch search(mp.problem, engine, budget);
    if (search.ceiling() <= best.get()) continue;
    ++result.atoms_searched;
    search.improve(best, options.parallel, [&](const detail::CoverHit& hit) {
      std::lock_guard lock(mutex);
      if (!best_cover || best_cover->value < hit.value) best_cover = cover_from_hit(atoms[next], model, mp, hit);
    });
    if (budget.stopped()) break;
  }
  if (budget.stopped()) {
    nlohmann::json frontier = nlohmann::json::array();
    for (std::size_t i = next; i < atoms.size(); ++i) frontier.push_back(atoms[i].to_json(model));
    throw PartialResult(std::string(what) + ": time budget exhausted", best.get(),
                        best_cover ? best_cover->to_json(model) : nlohmann::json(), frontier);
  }
  result.value = best.get();
  if (result.value == 0) return result;
  Budget unlimited;
  for (const auto& u : atoms) {
    const ModelProblem mp = model_problem(u, model);
    detail::CoverSearch search(mp.problem, engine, unlimited);
    if (search.ceiling() < result.value) continue;
    if (auto hit = search.first_at_least(result.value)) {
      result.certificate = cover_from_hit(u, model, mp, *hit);
      break;
    }
  }
  return result;
}

} // namespace

ModelResult t_model_local(const PSequence& u, const KrullModel& model, const SearchOptions& options) {
  if (static_cast<int>(u.counts.size()) != model.prime_count()) throw InvalidArgument("sequence is not over this model");
  if (!is_h_atom(u, model)) throw InvalidArgument("not an atom of the model");
  return run_model({u}, model, options, "t_model_local");
}

ModelResult t_model_global(const KrullModel& model, const SearchOptions& options) {
  auto reps = h_atom_representatives(model);
  std::stable_sort(reps.begin(), reps.end(), [](const PSequence& a, const PSequence& b) { return a.length() > b.length(); });
  return run_model(reps, model, options, "t_model_global");
}

} // namespace zslab
