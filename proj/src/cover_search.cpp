#include "cover_search.hpp"

#include <algorithm>
#include <mutex>

#include "zslab/error.hpp"

namespace zslab::detail {

std::vector<std::vector<std::vector<Count>>> multiset_partitions(const std::vector<Count>& counts, int min_parts) {
  std::vector<std::vector<std::vector<Count>>> out;
  std::vector<std::vector<Count>> parts;
  std::vector<Count> rest = counts;
  const std::size_t k = counts.size();

  // Next part: any nonzero sub-vector of rest that is lexicographically <=
  // the previous part. Sub-vectors are walked like an odometer.
  auto rec = [&](auto&& self, const std::vector<Count>* bound) -> void {
    if (std::all_of(rest.begin(), rest.end(), [](Count c) { return c == 0; })) {
      if (static_cast<int>(parts.size()) >= min_parts) out.push_back(parts);
      return;
    }
    std::vector<Count> p(k, 0);
    for (;;) {
      std::size_t i = k;
      while (i > 0) {
        --i;
        if (p[i] < rest[i]) {
          ++p[i];
          break;
        }
        p[i] = 0;
        if (i == 0) return;
      }
      if (bound && std::lexicographical_compare(bound->begin(), bound->end(), p.begin(), p.end())) continue;
      for (std::size_t j = 0; j < k; ++j) rest[j] = static_cast<Count>(rest[j] - p[j]);
      parts.push_back(p);
      self(self, &p);
      parts.pop_back();
      for (std::size_t j = 0; j < k; ++j) rest[j] = static_cast<Count>(rest[j] + p[j]);
    }
  };
  if (k > 0) rec(rec, nullptr);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return out;
}

namespace {
enum class Mode { Improve, Threshold, All };
} // namespace

struct CoverSearch::Scratch {
  Mode mode = Mode::All;
  MonotoneMax* best = nullptr;
  int threshold = 0;
  const std::function<void(const CoverHit&)>* report = nullptr;
  std::mutex* report_mutex = nullptr;
  bool done = false;
  std::optional<CoverHit> found;

  std::size_t partition = 0;
  std::vector<int> choice;
  std::vector<Count> w;
  int w_len = 0;
  std::vector<int> covered;
  std::vector<Count> tmp;
};

CoverSearch::CoverSearch(const CoverProblem& problem, LengthEngine& lengths, Budget& budget)
    : problem_(problem), lengths_(lengths), budget_(budget) {
  for (const auto& parts : problem_.partitions) {
    std::vector<int> rem(parts.size() + 1, 0);
    for (std::size_t i = parts.size(); i-- > 0;) {
      const auto& cands = problem_.candidates[parts[i]];
      if (cands.empty() || rem[i + 1] < 0) {
        rem[i] = -1;
        continue;
      }
      int mx = 0;
      for (const auto& c : cands) mx = std::max(mx, c.extra_length);
      rem[i] = rem[i + 1] + mx;
    }
    rem_max_.push_back(std::move(rem));
  }
}

int CoverSearch::ceiling() const {
  int out = 0;
  for (std::size_t p = 0; p < problem_.partitions.size(); ++p) {
    if (rem_max_[p][0] < 0) continue;
    const int m = static_cast<int>(problem_.partitions[p].size());
    out = std::max(out, std::max(problem_.count_parts ? m : 0, 1 + rem_max_[p][0] / 2));
  }
  return out;
}

// Greedy packing of disjoint atoms of length >= 3 into the partial W. Any
// such packing extends to a factorization of the final W, so
//   min L(W) <= (|W| - sum(|X| - 2)) / 2.
// Stops once the excess reaches cap.
int CoverSearch::excess_at_least(Scratch& s, int cap) const {
  const AtomTable& table = *lengths_.table();
  s.tmp = s.w;
  int excess = 0;
  for (std::size_t g = 1; g < s.tmp.size(); ++g) {
    if (s.tmp[g] == 0) continue;
    for (int idx : table.with_least(static_cast<Elem>(g))) {
      const SparseAtom& atom = table.sparse()[idx];
      if (atom.length < 3) continue;
      for (;;) {
        bool fits = true;
        for (auto [e, c] : atom.terms)
          if (s.tmp[e] < c) {
            fits = false;
            break;
          }
        if (!fits) break;
        for (auto [e, c] : atom.terms) s.tmp[e] = static_cast<Count>(s.tmp[e] - c);
        excess += atom.length - 2;
        if (excess >= cap) return excess;
      }
      if (s.tmp[g] == 0) break;
    }
  }
  return excess;
}

void CoverSearch::dfs(Scratch& s, std::size_t pos) {
  if (s.done || budget_.expired()) return;
  const auto& parts = problem_.partitions[s.partition];
  const int m = static_cast<int>(parts.size());
  const int m_term = problem_.count_parts ? m : 0;

  int target = 0;
  if (s.mode == Mode::Improve) target = s.best->get() + 1;
  if (s.mode == Mode::Threshold) target = s.threshold;

  if (pos == parts.size()) {
    if (problem_.require_minimal) {
      // U must not divide the product of the other parts' candidates.
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& tag = problem_.candidates[parts[i]][s.choice[i]].tag;
        bool divides_rest = true;
        for (std::size_t k = 0; k < problem_.need.size(); ++k)
          if (s.covered[k] - tag[k] < problem_.need[k]) {
            divides_rest = false;
            break;
          }
        if (divides_rest) return;
      }
    }
    if (s.mode != Mode::All && m_term < target) {
      const int slack = s.w_len - 2 * (target - 1);
      if (slack < 0 || s.w_len - excess_at_least(s, slack + 1) < 2 * (target - 1)) return;
    }
    const int min_len = s.w_len == 0 ? 0 : lengths_.min_length_counts(s.w, s.w_len);
    if (min_len >= LengthEngine::kUnfactorable) throw ValidationError("cover search produced an unfactorable remainder");
    CoverHit hit{std::max(m_term, 1 + min_len), min_len, s.partition, s.choice};
    switch (s.mode) {
    case Mode::Improve:
      if (s.best->offer(hit.value)) {
        std::lock_guard lock(*s.report_mutex);
        (*s.report)(hit);
      }
      break;
    case Mode::Threshold:
      if (hit.value >= target) {
        s.found = hit;
        s.done = true;
      }
      break;
    case Mode::All:
      (*s.report)(hit);
      break;
    }
    return;
  }

  if (s.mode != Mode::All && m_term < target) {
    const int reach = s.w_len + rem_max_[s.partition][pos];
    const int slack = reach - 2 * (target - 1);
    if (slack < 0) return;
    if (reach - excess_at_least(s, slack + 1) < 2 * (target - 1)) return;
  }

  const int pid = parts[pos];
  const auto& cands = problem_.candidates[pid];
  const std::size_t start = pos > 0 && parts[pos - 1] == pid ? static_cast<std::size_t>(s.choice[pos - 1]) : 0;
  for (std::size_t c = start; c < cands.size(); ++c) {
    const CoverCandidate& cand = cands[c];
    // candidates come longest first, so the length bound can only get worse
    if (s.mode == Mode::Improve) target = s.best->get() + 1;
    if (s.mode != Mode::All && m_term < target &&
        s.w_len + cand.extra_length + rem_max_[s.partition][pos + 1] < 2 * (target - 1))
      break;
    bool covers_early = problem_.require_minimal && pos + 1 < parts.size();
    for (std::size_t k = 0; k < problem_.need.size(); ++k) {
      s.covered[k] += cand.tag[k];
      if (s.covered[k] < problem_.need[k]) covers_early = false;
    }
    if (!covers_early) {
      for (auto [e, n] : cand.extra) s.w[e] = static_cast<Count>(s.w[e] + n);
      s.w_len += cand.extra_length;
      s.choice[pos] = static_cast<int>(c);
      dfs(s, pos + 1);
      for (auto [e, n] : cand.extra) s.w[e] = static_cast<Count>(s.w[e] - n);
      s.w_len -= cand.extra_length;
    }
    for (std::size_t k = 0; k < problem_.need.size(); ++k) s.covered[k] -= cand.tag[k];
    if (s.done) return;
  }
}

void CoverSearch::improve(MonotoneMax& best, const Parallelism& parallel, const std::function<void(const CoverHit&)>& on_hit) {
  std::vector<std::pair<std::size_t, int>> tasks;
  for (std::size_t p = 0; p < problem_.partitions.size(); ++p) {
    if (rem_max_[p][0] < 0) continue;
    const int n = static_cast<int>(problem_.candidates[problem_.partitions[p][0]].size());
    for (int c = 0; c < n; ++c) tasks.emplace_back(p, c);
  }
  std::mutex report_mutex;
  const std::size_t group_size = lengths_.table()->group()->size();
  parallel_for(parallel, tasks.size(), [&](std::size_t t) {
    Scratch s;
    s.mode = Mode::Improve;
    s.best = &best;
    s.report = &on_hit;
    s.report_mutex = &report_mutex;
    s.partition = tasks[t].first;
    const auto& parts = problem_.partitions[s.partition];
    s.choice.assign(parts.size(), 0);
    s.w.assign(group_size, 0);
    s.covered.assign(problem_.need.size(), 0);
    // Enter at the root so the node bound applies, but restrict the first
    // part to this task's candidate by running the first level by hand.
    const CoverCandidate& cand = problem_.candidates[parts[0]][tasks[t].second];
    bool covers_early = problem_.require_minimal && parts.size() > 1;
    for (std::size_t k = 0; k < problem_.need.size(); ++k) {
      s.covered[k] += cand.tag[k];
      if (s.covered[k] < problem_.need[k]) covers_early = false;
    }
    if (covers_early) return;
    for (auto [e, n] : cand.extra) s.w[e] = static_cast<Count>(s.w[e] + n);
    s.w_len = cand.extra_length;
    s.choice[0] = tasks[t].second;
    dfs(s, 1);
  });
}

std::optional<CoverHit> CoverSearch::first_at_least(int threshold) {
  Scratch s;
  s.mode = Mode::Threshold;
  s.threshold = threshold;
  for (std::size_t p = 0; p < problem_.partitions.size() && !s.done; ++p) {
    if (rem_max_[p][0] < 0) continue;
    s.partition = p;
    s.choice.assign(problem_.partitions[p].size(), 0);
    s.w.assign(lengths_.table()->group()->size(), 0);
    s.w_len = 0;
    s.covered.assign(problem_.need.size(), 0);
    dfs(s, 0);
  }
  return s.found;
}

void CoverSearch::for_each(const std::function<void(const CoverHit&)>& fn) {
  Scratch s;
  s.mode = Mode::All;
  s.report = &fn;
  for (std::size_t p = 0; p < problem_.partitions.size(); ++p) {
    if (rem_max_[p][0] < 0) continue;
    s.partition = p;
    s.choice.assign(problem_.partitions[p].size(), 0);
    s.w.assign(lengths_.table()->group()->size(), 0);
    s.w_len = 0;
    s.covered.assign(problem_.need.size(), 0);
    dfs(s, 0);
  }
}

} // namespace zslab::detail
