#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "zslab/atoms.hpp"

namespace zslab {

// Multiset of atom indices into one table.
struct Factorization {
  TablePtr table;
  std::map<int, int> parts;  // atom index -> multiplicity

  int length() const;
  Sequence product() const;
  nlohmann::json to_json() const;
  bool operator==(const Factorization& other) const { return table == other.table && parts == other.parts; }
  bool operator<(const Factorization& other) const { return parts < other.parts; }
};

constexpr int kMaxFactorizationInput = 10'000;

// Memo map split into independently locked shards. Each shard keeps two
// generations; when the current one fills up it becomes the old one and the
// previous old one is dropped, which approximates LRU eviction cheaply.
template <class Value>
class ShardedMemo {
public:
  explicit ShardedMemo(std::size_t capacity) : per_generation_(std::max<std::size_t>(capacity / (2 * kShards), 16)) {}

  bool find(const std::string& key, Value& out) {
    Shard& sh = shard(key);
    std::lock_guard lock(sh.mutex);
    if (auto it = sh.current.find(key); it != sh.current.end()) {
      out = it->second;
      return true;
    }
    if (auto it = sh.previous.find(key); it != sh.previous.end()) {
      out = it->second;
      sh.current.emplace(key, out);
      return true;
    }
    return false;
  }

  void put(const std::string& key, const Value& value) {
    Shard& sh = shard(key);
    std::lock_guard lock(sh.mutex);
    if (sh.current.size() >= per_generation_) {
      sh.previous = std::move(sh.current);
      sh.current.clear();
    }
    sh.current[key] = value;
  }

  std::size_t size() {
    std::size_t n = 0;
    for (auto& sh : shards_) {
      std::lock_guard lock(sh.mutex);
      n += sh.current.size() + sh.previous.size();
    }
    return n;
  }

private:
  static constexpr std::size_t kShards = 64;
  struct Shard {
    std::mutex mutex;
    std::unordered_map<std::string, Value> current;
    std::unordered_map<std::string, Value> previous;
  };
  Shard& shard(const std::string& key) { return shards_[std::hash<std::string>{}(key) % kShards]; }

  std::size_t per_generation_;
  Shard shards_[kShards];
};

// Minimum length and length sets over a fixed atom table, with a memo that
// persists across calls (remainders recur heavily inside cover searches).
class LengthEngine {
public:
  explicit LengthEngine(TablePtr table, std::size_t memo_capacity = std::size_t{1} << 22);

  const TablePtr& table() const { return table_; }

  int min_length(const Sequence& s);
  std::vector<int> length_set(const Sequence& s);

  // Hot-path entry: counts is a dense multiplicity vector of a zero-sum
  // sequence of the given length; it is restored before returning. Returns
  // kUnfactorable if the table cannot factor it.
  int min_length_counts(std::vector<Count>& counts, int length);

  static constexpr int kUnfactorable = 1 << 29;

private:
  void check_input(const Sequence& s) const;
  int min_rec(std::vector<Count>& counts, Elem from, int length);
  std::vector<int> lengths_rec(std::vector<Count>& counts, Elem from, int length);
  std::string key_of(const std::vector<Count>& counts, Elem from) const;
  bool fits(const SparseAtom& atom, const std::vector<Count>& counts) const;

  TablePtr table_;
  ShardedMemo<int> min_memo_;
  ShardedMemo<std::vector<int>> set_memo_;
};

std::vector<Factorization> enumerate_factorizations(const Sequence& s, const TablePtr& table,
                                                    std::size_t limit = 2'000'000);
std::vector<int> length_set(const Sequence& s, const TablePtr& table);
int min_length(const Sequence& s, const TablePtr& table);
int distance(const Factorization& z1, const Factorization& z2);

// Independent check: minimum over the full factorization set. Refuses inputs
// longer than cap.
int min_length_oracle(const Sequence& s, const TablePtr& table, int cap = 14);

} // namespace zslab
