#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zslab/factorization.hpp"
#include "zslab/parallel.hpp"

namespace zslab {

// U together with atoms V_1..V_m such that U | V_1...V_m but U divides no
// proper subproduct. W = U^-1 V_1...V_m.
struct CoverConfig {
  Sequence u;
  std::vector<Sequence> covers;
  Sequence w;
  std::optional<int> min_len_w;
  std::optional<int> value;  // max{m, 1 + min L(W)}

  int m() const { return static_cast<int>(covers.size()); }
  nlohmann::json to_json() const;
  static CoverConfig from_json(const GroupPtr& group, const nlohmann::json& j);
};

// Builds W and fills in min L(W) and the value. Throws InvalidArgument when
// U does not divide the product.
CoverConfig make_cover(const Sequence& u, std::vector<Sequence> covers);

struct CoverVerdict {
  bool ok = true;
  std::vector<std::string> problems;
};
// Checks every CoverConfig invariant from scratch; min L(W) is recomputed
// over the atoms dividing W only.
CoverVerdict verify_cover(const CoverConfig& c);

struct SearchOptions {
  Parallelism parallel;
  std::optional<double> budget_seconds;
  std::string cache_dir;        // atom tables; empty means no cache
  int automorphism_samples = 24;
};

struct TameResult {
  int value = 0;
  std::optional<CoverConfig> certificate;
  int atoms_total = 0;
  int atoms_searched = 0;  // orbit representatives actually explored
};

// Minimal covers of U with at most max_m atoms, each multiset once.
std::vector<CoverConfig> enumerate_minimal_covers(const Sequence& u, const TablePtr& table, int max_m);

int omega_local(const Sequence& u, const TablePtr& table);
TameResult t_local(const Sequence& u, const TablePtr& table, const SearchOptions& options = {});
// Max of t_local over all atoms; 0 when every atom is prime.
TameResult t_global(const TablePtr& table, const SearchOptions& options = {});
TameResult t_global(const GroupSpec& group, const SearchOptions& options = {});

// Krull monoids with enough primes in every class, computed from the block
// monoid: the local value for an atom U and the global value.
TameResult t_krull_local(const Sequence& u, const TablePtr& table, const SearchOptions& options = {});
TameResult t_krull(const TablePtr& table, const SearchOptions& options = {});
TameResult t_krull(const GroupSpec& group, const SearchOptions& options = {});

// Full atom table for a group, through the cache when one is configured.
TablePtr table_for(const GroupSpec& group, const SearchOptions& options);

} // namespace zslab
