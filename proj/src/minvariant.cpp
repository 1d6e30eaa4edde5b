#include <string>

#include "zslab/atoms.hpp"
#include "zslab/bounds.hpp"
#include "zslab/error.hpp"
#include "zslab/sequence.hpp"

// A counterexample for m(G, t) is a sequence over G \ {0} with v_g <= ord(g)
// and no minimal zero-sum subsequence of length >= t. Sub-multisets of a
// counterexample are counterexamples, so one depth-first pass over sorted
// sequences finds the longest one.
//
// Adding a term g to a counterexample S creates a long minimal zero-sum
// subsequence iff S has a zero-sum free R with sigma(R) = -g and |R| >= t-1:
// gR is then minimal, since a zero-sum proper part gR' would leave R/R' with
// sum zero.

namespace zslab {

namespace {

class MSearch {
public:
  MSearch(const GroupPtr& group, int t, const MInvariantOptions& options)
      : group_(group), t_(t), options_(options), elems_(nonzero_elements(*group)),
        counts_(group->size(), 0) {}

  void run() { extend(0); }

  std::vector<bool> exists;
  std::vector<Elem> longest;
  std::uint64_t nodes = 0;

private:
  void extend(std::size_t from) {
    if (++nodes > options_.node_limit) {
      const int best = static_cast<int>(longest.size()) + 1;
      nlohmann::json cert = nlohmann::json::array();
      for (Elem g : longest) cert.push_back(group_->element(g).coords);
      throw PartialResult("m_invariant: node limit reached", best, cert, nlohmann::json::object());
    }
    const std::size_t len = terms_.size();
    if (exists.size() <= len) exists.resize(len + 1, false);
    exists[len] = true;
    if (len > longest.size()) longest = terms_;
    for (std::size_t i = from; i < elems_.size(); ++i) {
      const Elem g = elems_[i];
      if (counts_[g] >= group_->order(g)) continue;
      if (closes_long_atom(g)) continue;
      terms_.push_back(g);
      ++counts_[g];
      extend(i);
      --counts_[g];
      terms_.pop_back();
    }
  }

  bool closes_long_atom(Elem g) {
    support_.clear();
    for (Elem x : elems_)
      if (counts_[x] > 0) support_.push_back(x);
    ElementSet reach(group_->size());
    return find_free(0, reach, Group::zero(), 0, group_->neg(g));
  }

  // zero-sum free R over the current terms with sigma(R) = target, |R| >= t-1
  bool find_free(std::size_t idx, const ElementSet& reach, Elem sum, int size, Elem target) {
    if (size >= t_ - 1 && size > 0 && sum == target) return true;
    if (idx == support_.size()) return false;
    const Elem x = support_[idx];
    ElementSet cur = reach;
    Elem s = sum;
    for (int c = 0; c <= counts_[x]; ++c) {
      if (c > 0) {
        fold_term(*group_, cur, x);
        if (cur.test(Group::zero())) break;
        s = group_->add(s, x);
      }
      if (find_free(idx + 1, cur, s, size + c, target)) return true;
    }
    return false;
  }

  GroupPtr group_;
  int t_;
  MInvariantOptions options_;
  std::vector<Elem> elems_;
  std::vector<int> counts_;
  std::vector<Elem> terms_;
  std::vector<Elem> support_;
};

} // namespace

MInvariantResult m_invariant(const GroupSpec& spec, int t, const MInvariantOptions& options) {
  if (spec.cardinality() == 1) throw HypothesisError("m_invariant: group must be nontrivial");
  const int d = davenport(spec);
  if (t < 2 || t > d) throw HypothesisError("m_invariant: t must lie in [2, D(G)] = [2, " + std::to_string(d) + "]");
  const GroupPtr group = Group::make(spec);
  MSearch search(group, t, options);
  search.run();

  MInvariantResult r;
  r.longest_counterexample = static_cast<int>(search.longest.size());
  r.counterexample = search.longest;
  r.counterexample_exists = search.exists;
  r.counterexample_exists.push_back(false);
  r.nodes = search.nodes;
  bool seen_false = false;
  for (bool e : r.counterexample_exists) {
    if (!e) seen_false = true;
    else if (seen_false) r.monotone = false;
  }
  r.value = std::max(d, r.longest_counterexample + 1);
  return r;
}

} // namespace zslab
