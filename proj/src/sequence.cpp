#include "zslab/sequence.hpp"

#include <algorithm>
#include <limits>

#include "zslab/error.hpp"

namespace zslab {

namespace {

void require_same_group(const Sequence& a, const Sequence& b) {
  if (!a.group() || !b.group() || a.group()->spec() != b.group()->spec())
    throw InvalidArgument("sequences belong to different groups");
}

} // namespace

Sequence::Sequence(GroupPtr group) : group_(std::move(group)) {
  if (!group_) throw InvalidArgument("sequence needs a group");
  counts_.assign(group_->size(), 0);
}

Sequence Sequence::from_terms(GroupPtr group, const std::vector<Elem>& terms) {
  Sequence s(std::move(group));
  for (Elem g : terms) s.add(g);
  return s;
}

Sequence Sequence::from_pairs(GroupPtr group, const std::vector<std::pair<GroupElement, int>>& pairs,
                              const SequenceLimits& limits) {
  Sequence s(group);
  const int cap = limits.max_multiplicity < 0 ? 10 * group->size() : limits.max_multiplicity;
  for (const auto& [element, mult] : pairs) {
    if (mult < 1) throw InvalidArgument("multiplicities must be >= 1");
    const Elem g = group->index(element);
    if (g == Group::zero() && !limits.allow_zero) throw InvalidArgument("zero element not allowed in a sequence over the nonzero elements");
    if (s.multiplicity(g) + mult > cap)
      throw InvalidArgument("multiplicity of " + group->format(g) + " exceeds the cap " + std::to_string(cap));
    s.add(g, mult);
  }
  return s;
}

std::vector<Elem> Sequence::support() const {
  std::vector<Elem> out;
  for (std::size_t g = 0; g < counts_.size(); ++g)
    if (counts_[g]) out.push_back(static_cast<Elem>(g));
  return out;
}

std::vector<Elem> Sequence::terms() const {
  std::vector<Elem> out;
  out.reserve(length_);
  for (std::size_t g = 0; g < counts_.size(); ++g)
    for (int k = 0; k < counts_[g]; ++k) out.push_back(static_cast<Elem>(g));
  return out;
}

void Sequence::add(Elem g, int k) {
  if (static_cast<int>(counts_[g]) + k > std::numeric_limits<Count>::max())
    throw ResourceLimit("sequence multiplicity overflow");
  counts_[g] = static_cast<Count>(counts_[g] + k);
  length_ += k;
}

void Sequence::remove(Elem g, int k) {
  if (counts_[g] < k) throw InvalidArgument("removing more copies than present");
  counts_[g] = static_cast<Count>(counts_[g] - k);
  length_ -= k;
}

Sequence Sequence::times(const Sequence& other) const {
  require_same_group(*this, other);
  Sequence out = *this;
  for (std::size_t g = 0; g < counts_.size(); ++g)
    if (other.counts_[g]) out.add(static_cast<Elem>(g), other.counts_[g]);
  return out;
}

Sequence Sequence::over(const Sequence& divisor) const {
  require_same_group(*this, divisor);
  if (!divides(divisor, *this)) throw InvalidArgument("sequence does not divide");
  Sequence out = *this;
  for (std::size_t g = 0; g < counts_.size(); ++g)
    if (divisor.counts_[g]) out.remove(static_cast<Elem>(g), divisor.counts_[g]);
  return out;
}

Sequence Sequence::negated() const {
  Sequence out(group_);
  for (std::size_t g = 0; g < counts_.size(); ++g)
    if (counts_[g]) out.add(group_->neg(static_cast<Elem>(g)), counts_[g]);
  return out;
}

bool Sequence::operator==(const Sequence& other) const {
  if (!group_ || !other.group_) return !group_ && !other.group_;
  return group_->spec() == other.group_->spec() && counts_ == other.counts_;
}

std::size_t Sequence::hash() const {
  std::size_t h = 1469598103934665603ULL;
  for (Count c : counts_) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Sequence::to_string() const {
  if (length_ == 0) return "1";
  std::string out;
  for (Elem g : support()) {
    if (!out.empty()) out += ' ';
    out += group_->format(g);
    if (counts_[g] > 1) out += "^" + std::to_string(counts_[g]);
  }
  return out;
}

bool canonical_less(const Sequence& a, const Sequence& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  return a.counts() < b.counts();
}

Elem sigma(const Sequence& s) {
  const Group& group = *s.group();
  Elem total = Group::zero();
  for (Elem g : s.support()) total = group.add(total, group.scale(g, s.multiplicity(g)));
  return total;
}

void fold_term(const Group& group, ElementSet& reach, Elem g) {
  ElementSet shifted(reach.size());
  for (auto x = reach.find_first(); x != ElementSet::npos; x = reach.find_next(x))
    shifted.set(group.add(static_cast<Elem>(x), g));
  reach |= shifted;
  reach.set(g);
}

ElementSet subsum_set(const Sequence& s) {
  const Group& group = *s.group();
  ElementSet reach(group.size());
  for (Elem g : s.support()) {
    // g added more often than its order only revisits the same sums
    const int reps = std::min<int>(s.multiplicity(g), group.order(g));
    for (int k = 0; k < reps; ++k) fold_term(group, reach, g);
  }
  return reach;
}

bool is_zero_sum_free(const Sequence& s) { return !subsum_set(s).test(Group::zero()); }

bool is_minimal_zero_sum(const Sequence& s) {
  if (s.length() < 1 || sigma(s) != Group::zero()) return false;
  // drop one copy of any term; the rest must be zero-sum free
  Sequence rest = s;
  rest.remove(s.support().front());
  return is_zero_sum_free(rest);
}

bool divides(const Sequence& s, const Sequence& t) {
  require_same_group(s, t);
  for (std::size_t g = 0; g < s.counts().size(); ++g)
    if (s.counts()[g] > t.counts()[g]) return false;
  return true;
}

nlohmann::json sequence_to_json(const Sequence& s) {
  nlohmann::json out = nlohmann::json::array();
  for (Elem g : s.support()) out.push_back({s.group()->element(g).coords, s.multiplicity(g)});
  return out;
}

Sequence sequence_from_json(const GroupPtr& group, const nlohmann::json& j, const SequenceLimits& limits) {
  if (!j.is_array()) throw InvalidArgument("sequence JSON must be an array of [coords, multiplicity] pairs");
  std::vector<std::pair<GroupElement, int>> pairs;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_array() || !item[1].is_number_integer())
      throw InvalidArgument("sequence JSON entries must be [coords, multiplicity]");
    GroupElement g;
    for (const auto& c : item[0]) {
      if (!c.is_number_integer()) throw InvalidArgument("coordinates must be integers");
      g.coords.push_back(c.get<int>());
    }
    if (static_cast<int>(g.coords.size()) != group->spec().rank())
      throw InvalidArgument("coordinate vector length does not match the group rank");
    pairs.emplace_back(std::move(g), item[1].get<int>());
  }
  return Sequence::from_pairs(group, pairs, limits);
}

} // namespace zslab
