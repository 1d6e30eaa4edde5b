#include "zslab/factorization.hpp"

#include <algorithm>

#include "zslab/error.hpp"

namespace zslab {

int Factorization::length() const {
  int n = 0;
  for (auto [idx, mult] : parts) n += mult;
  return n;
}

Sequence Factorization::product() const {
  Sequence out(table->group());
  for (auto [idx, mult] : parts)
    for (int k = 0; k < mult; ++k) out = out.times(table->atom(idx));
  return out;
}

nlohmann::json Factorization::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (auto [idx, mult] : parts) out.push_back({idx, mult});
  return out;
}

namespace {

void check_against_table(const Sequence& s, const AtomTable& table) {
  if (s.group()->spec() != table.group()->spec()) throw InvalidArgument("sequence and atom table are over different groups");
  if (s.length() > kMaxFactorizationInput)
    throw InvalidArgument("sequence longer than " + std::to_string(kMaxFactorizationInput) + " terms");
  if (sigma(s) != Group::zero()) throw InvalidArgument("not a zero-sum sequence: " + s.to_string());
  std::vector<bool> in_g0(s.group()->size(), false);
  for (Elem g : table.g0()) in_g0[g] = true;
  for (Elem g : s.support()) {
    if (!in_g0[g]) throw InvalidArgument("element " + s.group()->format(g) + " is not supported by the atom table");
    if (table.bounded() && s.multiplicity(g) > table.caps()[g])
      throw InvalidArgument("sequence exceeds the multiplicity caps of the atom table");
  }
}

} // namespace

LengthEngine::LengthEngine(TablePtr table, std::size_t memo_capacity)
    : table_(std::move(table)), min_memo_(memo_capacity), set_memo_(memo_capacity / 4) {}

void LengthEngine::check_input(const Sequence& s) const { check_against_table(s, *table_); }

std::string LengthEngine::key_of(const std::vector<Count>& counts, Elem from) const {
  std::string key;
  auto put = [&key](std::uint32_t v) {
    while (v >= 0x80) {
      key.push_back(static_cast<char>((v & 0x7F) | 0x80));
      v >>= 7;
    }
    key.push_back(static_cast<char>(v));
  };
  for (std::size_t g = from; g < counts.size(); ++g)
    if (counts[g]) {
      put(static_cast<std::uint32_t>(g));
      put(counts[g]);
    }
  return key;
}

bool LengthEngine::fits(const SparseAtom& atom, const std::vector<Count>& counts) const {
  for (auto [g, c] : atom.terms)
    if (counts[g] < c) return false;
  return true;
}

int LengthEngine::min_rec(std::vector<Count>& counts, Elem from, int length) {
  if (length == 0) return 0;
  while (counts[from] == 0) ++from;
  const std::string key = key_of(counts, from);
  int cached = 0;
  if (min_memo_.find(key, cached)) return cached;

  const int dav = std::max(table_->davenport(), 1);
  const int floor_here = (length + dav - 1) / dav;
  int best = kUnfactorable;
  // Every factorization has an atom through the least remaining element, and
  // that atom's own least element is this one.
  for (int idx : table_->with_least(from)) {
    const SparseAtom& atom = table_->sparse()[idx];
    if (!fits(atom, counts)) continue;
    const int rest = length - atom.length;
    if (1 + (rest + dav - 1) / dav >= best) continue;
    for (auto [g, c] : atom.terms) counts[g] = static_cast<Count>(counts[g] - c);
    const int sub = min_rec(counts, from, rest);
    for (auto [g, c] : atom.terms) counts[g] = static_cast<Count>(counts[g] + c);
    if (sub < kUnfactorable) best = std::min(best, 1 + sub);
    if (best == floor_here) break;
  }
  min_memo_.put(key, best);
  return best;
}

std::vector<int> LengthEngine::lengths_rec(std::vector<Count>& counts, Elem from, int length) {
  if (length == 0) return {0};
  while (counts[from] == 0) ++from;
  const std::string key = key_of(counts, from);
  std::vector<int> cached;
  if (set_memo_.find(key, cached)) return cached;

  std::vector<int> out;
  for (int idx : table_->with_least(from)) {
    const SparseAtom& atom = table_->sparse()[idx];
    if (!fits(atom, counts)) continue;
    for (auto [g, c] : atom.terms) counts[g] = static_cast<Count>(counts[g] - c);
    std::vector<int> sub = lengths_rec(counts, from, length - atom.length);
    for (auto [g, c] : atom.terms) counts[g] = static_cast<Count>(counts[g] + c);
    std::vector<int> merged;
    merged.reserve(out.size() + sub.size());
    for (int& l : sub) ++l;
    std::set_union(out.begin(), out.end(), sub.begin(), sub.end(), std::back_inserter(merged));
    out = std::move(merged);
  }
  set_memo_.put(key, out);
  return out;
}

int LengthEngine::min_length_counts(std::vector<Count>& counts, int length) { return min_rec(counts, 0, length); }

int LengthEngine::min_length(const Sequence& s) {
  check_input(s);
  std::vector<Count> counts = s.counts();
  const int v = min_rec(counts, 0, s.length());
  if (v >= kUnfactorable) throw ValidationError("atom table cannot factor " + s.to_string());
  return v;
}

std::vector<int> LengthEngine::length_set(const Sequence& s) {
  check_input(s);
  std::vector<Count> counts = s.counts();
  std::vector<int> out = lengths_rec(counts, 0, s.length());
  if (out.empty()) throw ValidationError("atom table cannot factor " + s.to_string());
  return out;
}

std::vector<Factorization> enumerate_factorizations(const Sequence& s, const TablePtr& table, std::size_t limit) {
  check_against_table(s, *table);
  std::vector<Factorization> out;
  std::vector<Count> counts = s.counts();
  std::map<int, int> parts;
  const auto& sparse = table->sparse();

  // Branch on the least remaining element; while that element stays the
  // least, chosen atoms go in non-decreasing index order so each multiset
  // is produced once.
  auto rec = [&](auto&& self, Elem from, int length, Elem prev_least, std::size_t min_pos) -> void {
    if (length == 0) {
      out.push_back(Factorization{table, parts});
      if (out.size() > limit) throw ResourceLimit("more than " + std::to_string(limit) + " factorizations");
      return;
    }
    while (counts[from] == 0) ++from;
    const auto& list = table->with_least(from);
    const std::size_t start = from == prev_least ? min_pos : 0;
    for (std::size_t k = start; k < list.size(); ++k) {
      const SparseAtom& atom = sparse[list[k]];
      bool ok = true;
      for (auto [g, c] : atom.terms)
        if (counts[g] < c) {
          ok = false;
          break;
        }
      if (!ok) continue;
      for (auto [g, c] : atom.terms) counts[g] = static_cast<Count>(counts[g] - c);
      ++parts[list[k]];
      self(self, from, length - atom.length, from, k);
      if (--parts[list[k]] == 0) parts.erase(list[k]);
      for (auto [g, c] : atom.terms) counts[g] = static_cast<Count>(counts[g] + c);
    }
  };
  rec(rec, 0, s.length(), static_cast<Elem>(-1), 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> length_set(const Sequence& s, const TablePtr& table) { return LengthEngine(table, 1 << 16).length_set(s); }

int min_length(const Sequence& s, const TablePtr& table) { return LengthEngine(table, 1 << 16).min_length(s); }

int distance(const Factorization& z1, const Factorization& z2) {
  if (z1.table != z2.table && !(z1.table && z2.table && *z1.table == *z2.table))
    throw InvalidArgument("distance: factorizations refer to different atom tables");
  int common = 0;
  for (auto [idx, mult] : z1.parts) {
    auto it = z2.parts.find(idx);
    if (it != z2.parts.end()) common += std::min(mult, it->second);
  }
  return std::max(z1.length() - common, z2.length() - common);
}

int min_length_oracle(const Sequence& s, const TablePtr& table, int cap) {
  if (s.length() > cap) throw InvalidArgument("min_length_oracle: input longer than the oracle cap " + std::to_string(cap));
  const auto all = enumerate_factorizations(s, table);
  if (all.empty()) throw ValidationError("atom table cannot factor " + s.to_string());
  int best = all.front().length();
  for (const auto& z : all) best = std::min(best, z.length());
  return best;
}

} // namespace zslab
