#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "zslab/parallel.hpp"
#include "zslab/sequence.hpp"

namespace zslab {

struct AtomOptions {
  // Per-element multiplicity caps (indexed by Elem). Empty means uncapped,
  // which yields the complete atom set over g0.
  std::vector<int> caps;
  std::size_t limit = 5'000'000;
  Parallelism parallel;
};

// Sparse copy of an atom for the hot loops.
struct SparseAtom {
  std::vector<std::pair<Elem, Count>> terms;
  int length = 0;
};

class AtomTable;
using TablePtr = std::shared_ptr<const AtomTable>;

// Indexed, canonically sorted list of minimal zero-sum sequences over g0.
class AtomTable {
public:
  static TablePtr assemble(GroupPtr group, std::vector<Elem> g0, std::vector<Sequence> atoms, std::vector<int> caps = {});

  const GroupPtr& group() const { return group_; }
  const std::vector<Elem>& g0() const { return g0_; }
  bool full_support() const { return static_cast<int>(g0_.size()) == group_->size() - 1; }
  const std::vector<Sequence>& atoms() const { return atoms_; }
  const Sequence& atom(int i) const { return atoms_[i]; }
  int size() const { return static_cast<int>(atoms_.size()); }
  int davenport() const { return davenport_; }
  const std::vector<int>& caps() const { return caps_; }
  bool bounded() const { return !caps_.empty(); }

  const std::vector<int>& containing(Elem g) const { return by_element_[g]; }
  // atoms whose canonically least element is g
  const std::vector<int>& with_least(Elem g) const { return by_least_[g]; }
  const std::vector<SparseAtom>& sparse() const { return sparse_; }
  std::optional<int> find(const Sequence& s) const;

  bool operator==(const AtomTable& other) const;

private:
  AtomTable() = default;
  GroupPtr group_;
  std::vector<Elem> g0_;
  std::vector<Sequence> atoms_;
  std::vector<int> caps_;
  int davenport_ = 0;
  std::vector<std::vector<int>> by_element_;
  std::vector<std::vector<int>> by_least_;
  std::vector<SparseAtom> sparse_;
  std::unordered_map<Sequence, int, SequenceHash> lookup_;
};

// All nonzero elements in ascending order.
std::vector<Elem> nonzero_elements(const Group& group);

TablePtr enumerate_atoms(const GroupPtr& group, std::vector<Elem> g0, const AtomOptions& options = {});
TablePtr enumerate_atoms(const GroupPtr& group);
// Atoms dividing s: the support of s with its multiplicities as caps. This is
// all that factorizations of s can use.
TablePtr atoms_dividing(const Sequence& s);

// Visits every zero-sum free sequence over g0 (within caps), including the
// empty one, in depth-first non-decreasing order. The callback receives the
// terms, their sum, and the reachable-subsum set; returning false prunes the
// subtree.
using ZeroSumFreeVisitor = std::function<bool(const std::vector<Elem>& terms, Elem sum, const ElementSet& reach)>;
void for_each_zero_sum_free(const Group& group, const std::vector<Elem>& g0, const std::vector<int>& caps,
                            const ZeroSumFreeVisitor& visit);

int davenport(const GroupSpec& group);

// Cache file handling.
void save_table(const AtomTable& table, const std::string& path);
// expected: when set, the file's group must match. trusted skips the
// minimality and completeness re-checks.
TablePtr load_table(const std::string& path, const GroupSpec* expected = nullptr, bool trusted = false);

// Directory-backed cache; a file that fails validation is recomputed.
class AtomCache {
public:
  explicit AtomCache(std::string directory, Parallelism parallel = {});
  TablePtr get(const GroupPtr& group);
  TablePtr get(const GroupPtr& group, const std::vector<Elem>& g0);
  std::string path_for(const GroupSpec& spec, const std::vector<Elem>& g0, bool full) const;

private:
  std::string directory_;
  Parallelism parallel_;
};

} // namespace zslab
