#pragma once
// Shared branch-and-bound over "covers": a fixed multiset U is split into
// parts, every part is extended by a candidate, and a choice is scored by
// max{m, 1 + min L(W)} (or just 1 + min L(W)) where W collects the
// extensions. The tame degree, the Krull formulas and the finite Krull
// models all reduce to this.

#include <functional>
#include <optional>
#include <vector>

#include "zslab/factorization.hpp"
#include "zslab/parallel.hpp"

namespace zslab::detail {

struct CoverCandidate {
  std::vector<std::pair<Elem, Count>> extra;  // contribution to W, as group elements
  int extra_length = 0;
  std::vector<Count> tag;  // multiplicities over the tracked items of U
  int id = -1;             // caller's handle (atom index, ...)
};

struct CoverProblem {
  std::vector<Count> need;  // U over the tracked items
  std::vector<std::vector<CoverCandidate>> candidates;  // by part id
  std::vector<std::vector<int>> partitions;             // part ids; equal ids adjacent
  bool count_parts = true;   // score includes m
  bool require_minimal = true;
};

struct CoverHit {
  int value = 0;
  int min_len = 0;
  std::size_t partition = 0;
  std::vector<int> choice;  // candidate index per part position
};

// Multiset partitions of counts into nonempty parts, listed with parts in
// non-increasing lexicographic order (so equal parts are adjacent).
std::vector<std::vector<std::vector<Count>>> multiset_partitions(const std::vector<Count>& counts, int min_parts = 1);

class CoverSearch {
public:
  CoverSearch(const CoverProblem& problem, LengthEngine& lengths, Budget& budget);

  // Finds every choice scoring above best (and raises best as it goes).
  // Partitions are explored in the given order; tasks run in parallel.
  void improve(MonotoneMax& best, const Parallelism& parallel, const std::function<void(const CoverHit&)>& on_hit);
  // First choice, in sequential search order, with value >= threshold.
  std::optional<CoverHit> first_at_least(int threshold);
  // Every admissible choice, no pruning.
  void for_each(const std::function<void(const CoverHit&)>& fn);

  // Upper bound on any score reachable in this problem.
  int ceiling() const;

private:
  struct Scratch;
  void dfs(Scratch& s, std::size_t pos);
  int excess_at_least(Scratch& s, int cap) const;

  const CoverProblem& problem_;
  LengthEngine& lengths_;
  Budget& budget_;
  std::vector<std::vector<int>> rem_max_;  // per partition: suffix sums of max extra length
};

} // namespace zslab::detail
