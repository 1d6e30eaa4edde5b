#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace zslab {

using Rational = boost::rational<std::int64_t>;

// Finite abelian group in invariant-factor form n1 | n2 | ... | nr.
// The empty factor list is the trivial group.
class GroupSpec {
public:
  GroupSpec() = default;

  // Accepts any list of cyclic orders >= 2 and normalizes it.
  static GroupSpec from_cyclic(const std::vector<int>& cyclic_orders);
  // "2,2,2", "4,2,3"; a lone "1" or an empty string is the trivial group.
  static GroupSpec parse(std::string_view text);

  const std::vector<int>& factors() const { return factors_; }
  std::int64_t cardinality() const;
  int exponent() const { return factors_.empty() ? 1 : factors_.back(); }
  int rank() const { return static_cast<int>(factors_.size()); }
  std::string to_string() const;

  auto operator<=>(const GroupSpec&) const = default;

private:
  std::vector<int> factors_;
};

GroupSpec normalize_group(const std::vector<int>& cyclic_orders);

// Normalization together with an explicit isomorphism: image_of_generator[i]
// is the coordinate vector (in the normalized group) of the i-th input cyclic
// generator.
struct NormalizedWithEmbedding {
  GroupSpec group;
  std::vector<std::vector<int>> image_of_generator;
};
NormalizedWithEmbedding normalize_with_embedding(const std::vector<int>& cyclic_orders);

struct GroupElement {
  std::vector<int> coords;
  auto operator<=>(const GroupElement&) const = default;
};

bool is_valid_element(const GroupSpec& group, const GroupElement& g);
int element_order(const GroupSpec& group, const GroupElement& g);

struct ClassicInvariants {
  int dstar = 0;       // sum of (n_i - 1)
  int Dstar = 1;       // dstar + 1
  Rational kstar{0};   // sum over prime-power components q of (q-1)/q
  int rank = 0;
  int total_rank = 0;  // number of prime-power components
};
ClassicInvariants classic_invariants(const GroupSpec& group);

// Prime-power components of the group, e.g. [2,12] -> {2, 4, 3}.
std::vector<int> prime_power_components(const GroupSpec& group);

// (prime, exponent) pairs in increasing prime order.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
bool is_prime(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);
// #{a in [1, m] : gcd(a, n) = 1}; requires 1 <= m <= n.
std::int64_t legendre_totient(std::int64_t m, std::int64_t n);
int omega_distinct_primes(std::int64_t n);

// All groups of the given cardinality (each exactly once, normalized).
std::vector<GroupSpec> groups_of_order(std::int64_t order);

// Dense element index. Coordinates are read in mixed radix with the first
// coordinate most significant, so index order is the lexicographic order.
using Elem = std::uint32_t;

// A GroupSpec with element tables for fast arithmetic.
class Group {
public:
  static std::shared_ptr<const Group> make(const GroupSpec& spec);

  const GroupSpec& spec() const { return spec_; }
  int size() const { return size_; }
  static constexpr Elem zero() { return 0; }

  Elem add(Elem a, Elem b) const {
    return add_table_.empty() ? add_slow(a, b) : add_table_[static_cast<std::size_t>(a) * size_ + b];
  }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem scale(Elem a, std::int64_t k) const;
  int order(Elem a) const { return order_[a]; }

  GroupElement element(Elem a) const;
  Elem index(const GroupElement& g) const;  // throws InvalidArgument if invalid
  Elem index_of(const std::vector<int>& coords) const { return index(GroupElement{coords}); }
  std::string format(Elem a) const;         // "(1,0)"

private:
  explicit Group(const GroupSpec& spec);
  Elem add_slow(Elem a, Elem b) const;

  GroupSpec spec_;
  int size_ = 1;
  std::vector<int> radix_weight_;
  std::vector<Elem> add_table_;
  std::vector<Elem> neg_;
  std::vector<int> order_;
};

using GroupPtr = std::shared_ptr<const Group>;

} // namespace zslab
