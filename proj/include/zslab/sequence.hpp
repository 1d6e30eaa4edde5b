#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "json.hpp"
#include "zslab/group.hpp"

namespace zslab {

using Count = std::uint16_t;
using ElementSet = boost::dynamic_bitset<std::uint64_t>;

struct SequenceLimits {
  int max_multiplicity = -1;  // -1 means 10 * |G|
  bool allow_zero = false;
};

// Finite multiset over group elements, stored densely by element index.
class Sequence {
public:
  Sequence() = default;
  explicit Sequence(GroupPtr group);

  static Sequence from_terms(GroupPtr group, const std::vector<Elem>& terms);
  static Sequence from_pairs(GroupPtr group, const std::vector<std::pair<GroupElement, int>>& pairs,
                             const SequenceLimits& limits = {});

  const GroupPtr& group() const { return group_; }
  int length() const { return length_; }
  bool empty() const { return length_ == 0; }
  int multiplicity(Elem g) const { return counts_[g]; }
  const std::vector<Count>& counts() const { return counts_; }
  std::vector<Elem> support() const;
  std::vector<Elem> terms() const;  // expanded, ascending

  void add(Elem g, int k = 1);
  void remove(Elem g, int k = 1);
  Sequence times(const Sequence& other) const;
  Sequence over(const Sequence& divisor) const;  // this * divisor^-1, must divide
  Sequence negated() const;

  bool operator==(const Sequence& other) const;
  std::size_t hash() const;
  std::string to_string() const;

private:
  GroupPtr group_;
  std::vector<Count> counts_;
  int length_ = 0;
};

// Order used to sort atom lists: by length, then multiplicity vector.
bool canonical_less(const Sequence& a, const Sequence& b);

struct SequenceHash {
  std::size_t operator()(const Sequence& s) const { return s.hash(); }
};

Elem sigma(const Sequence& s);
ElementSet subsum_set(const Sequence& s);
bool is_zero_sum_free(const Sequence& s);
bool is_minimal_zero_sum(const Sequence& s);
bool divides(const Sequence& s, const Sequence& t);

// Folds one more term into a reachable-subsum set: reach u {g} u (reach + g).
void fold_term(const Group& group, ElementSet& reach, Elem g);

nlohmann::json sequence_to_json(const Sequence& s);
Sequence sequence_from_json(const GroupPtr& group, const nlohmann::json& j, const SequenceLimits& limits = {});

} // namespace zslab
