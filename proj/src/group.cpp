#include "zslab/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "zslab/error.hpp"

namespace zslab {

namespace {

constexpr int kMaxTabulatedAdd = 1024;
constexpr std::int64_t kMaxGroupForTables = 1 << 20;

void integer_partitions(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(n, max_part); part >= 1; --part) {
    cur.push_back(part);
    integer_partitions(n - part, part, cur, out);
    cur.pop_back();
  }
}

} // namespace

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  if (n < 1) throw InvalidArgument("factorize: n must be positive");
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

std::int64_t legendre_totient(std::int64_t m, std::int64_t n) {
  if (n < 1 || m < 1 || m > n) throw InvalidArgument("legendre_totient: need 1 <= m <= n");
  std::vector<std::int64_t> primes;
  for (auto [p, e] : factorize(n)) primes.push_back(p);
  // inclusion-exclusion over squarefree divisors of rad(n)
  std::int64_t total = 0;
  const std::size_t subsets = std::size_t{1} << primes.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::int64_t d = 1;
    int bits = 0;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (mask >> i & 1U) {
        d *= primes[i];
        ++bits;
      }
    total += (bits % 2 == 0 ? 1 : -1) * (m / d);
  }
  return total;
}

int omega_distinct_primes(std::int64_t n) {
  if (n < 1) throw InvalidArgument("omega_distinct_primes: n must be >= 1");
  return static_cast<int>(factorize(n).size());
}

NormalizedWithEmbedding normalize_with_embedding(const std::vector<int>& cyclic_orders) {
  struct Component {
    std::int64_t power;
    std::size_t source;
  };
  std::map<std::int64_t, std::vector<Component>> by_prime;
  for (std::size_t i = 0; i < cyclic_orders.size(); ++i) {
    if (cyclic_orders[i] < 2) throw InvalidArgument("invalid cyclic factor " + std::to_string(cyclic_orders[i]) + " (must be >= 2)");
    for (auto [p, e] : factorize(cyclic_orders[i])) {
      std::int64_t q = 1;
      for (int k = 0; k < e; ++k) q *= p;
      by_prime[p].push_back({q, i});
    }
  }
  std::size_t slots = 0;
  for (auto& [p, comps] : by_prime) {
    std::stable_sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) { return a.power > b.power; });
    slots = std::max(slots, comps.size());
  }
  // slot 0 carries the largest power of every prime, so it is the exponent
  std::vector<std::int64_t> slot_order(slots, 1);
  for (auto& [p, comps] : by_prime)
    for (std::size_t k = 0; k < comps.size(); ++k) slot_order[k] *= comps[k].power;

  NormalizedWithEmbedding out;
  std::vector<int> factors(slots);
  for (std::size_t k = 0; k < slots; ++k) factors[slots - 1 - k] = static_cast<int>(slot_order[k]);
  out.image_of_generator.assign(cyclic_orders.size(), std::vector<int>(slots, 0));
  for (auto& [p, comps] : by_prime)
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const std::size_t coord = slots - 1 - k;
      auto& img = out.image_of_generator[comps[k].source];
      img[coord] = static_cast<int>((img[coord] + slot_order[k] / comps[k].power) % slot_order[k]);
    }
  // factors is already a divisor chain, so this only wraps it
  out.group = GroupSpec::from_cyclic(factors);
  return out;
}

GroupSpec normalize_group(const std::vector<int>& cyclic_orders) { return GroupSpec::from_cyclic(cyclic_orders); }

GroupSpec GroupSpec::from_cyclic(const std::vector<int>& cyclic_orders) {
  for (int n : cyclic_orders)
    if (n < 2) throw InvalidArgument("invalid cyclic factor " + std::to_string(n) + " (must be >= 2)");
  std::map<std::int64_t, std::vector<std::int64_t>> by_prime;
  for (int n : cyclic_orders)
    for (auto [p, e] : factorize(n)) {
      std::int64_t q = 1;
      for (int k = 0; k < e; ++k) q *= p;
      by_prime[p].push_back(q);
    }
  std::size_t slots = 0;
  for (auto& [p, powers] : by_prime) {
    std::sort(powers.begin(), powers.end(), std::greater<>());
    slots = std::max(slots, powers.size());
  }
  std::vector<std::int64_t> slot_order(slots, 1);
  for (auto& [p, powers] : by_prime)
    for (std::size_t k = 0; k < powers.size(); ++k) slot_order[k] *= powers[k];
  GroupSpec spec;
  spec.factors_.resize(slots);
  for (std::size_t k = 0; k < slots; ++k) spec.factors_[slots - 1 - k] = static_cast<int>(slot_order[k]);
  return spec;
}

GroupSpec GroupSpec::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.empty() || s == "1") return GroupSpec{};
  std::vector<int> orders;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || item.size() > 9)
      throw InvalidArgument("malformed group string '" + std::string(text) + "'");
    orders.push_back(std::stoi(item));
  }
  if (!s.empty() && s.back() == ',') throw InvalidArgument("malformed group string '" + std::string(text) + "'");
  return from_cyclic(orders);
}

std::int64_t GroupSpec::cardinality() const {
  std::int64_t c = 1;
  for (int n : factors_) c *= n;
  return c;
}

std::string GroupSpec::to_string() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(factors_[i]);
  }
  return out;
}

bool is_valid_element(const GroupSpec& group, const GroupElement& g) {
  if (static_cast<int>(g.coords.size()) != group.rank()) return false;
  for (int i = 0; i < group.rank(); ++i)
    if (g.coords[i] < 0 || g.coords[i] >= group.factors()[i]) return false;
  return true;
}

int element_order(const GroupSpec& group, const GroupElement& g) {
  if (!is_valid_element(group, g)) throw InvalidArgument("element not valid for group " + group.to_string());
  std::int64_t ord = 1;
  for (int i = 0; i < group.rank(); ++i) {
    const int n = group.factors()[i];
    const std::int64_t local = n / std::gcd(g.coords[i], n);
    ord = std::lcm(ord, local);
  }
  return static_cast<int>(ord);
}

std::vector<int> prime_power_components(const GroupSpec& group) {
  std::vector<int> out;
  for (int n : group.factors())
    for (auto [p, e] : factorize(n)) {
      int q = 1;
      for (int k = 0; k < e; ++k) q *= static_cast<int>(p);
      out.push_back(q);
    }
  return out;
}

ClassicInvariants classic_invariants(const GroupSpec& group) {
  ClassicInvariants inv;
  for (int n : group.factors()) inv.dstar += n - 1;
  inv.Dstar = inv.dstar + 1;
  inv.rank = group.rank();
  for (int q : prime_power_components(group)) {
    inv.kstar += Rational(q - 1, q);
    ++inv.total_rank;
  }
  return inv;
}

std::vector<GroupSpec> groups_of_order(std::int64_t order) {
  if (order < 1) throw InvalidArgument("groups_of_order: order must be >= 1");
  std::vector<std::vector<int>> combos{{}};
  for (auto [p, e] : factorize(order)) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    integer_partitions(e, e, cur, parts);
    std::vector<std::vector<int>> next;
    for (const auto& base : combos)
      for (const auto& part : parts) {
        auto c = base;
        for (int k : part) {
          int q = 1;
          for (int i = 0; i < k; ++i) q *= static_cast<int>(p);
          c.push_back(q);
        }
        next.push_back(std::move(c));
      }
    combos = std::move(next);
  }
  std::vector<GroupSpec> out;
  for (const auto& c : combos) out.push_back(c.empty() ? GroupSpec{} : GroupSpec::from_cyclic(c));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const Group> Group::make(const GroupSpec& spec) {
  return std::shared_ptr<const Group>(new Group(spec));
}

Group::Group(const GroupSpec& spec) : spec_(spec) {
  const std::int64_t card = spec.cardinality();
  if (card > kMaxGroupForTables)
    throw InvalidArgument("group " + spec.to_string() + " is too large for explicit element tables");
  size_ = static_cast<int>(card);
  const int r = spec.rank();
  radix_weight_.assign(r, 1);
  for (int i = r - 2; i >= 0; --i) radix_weight_[i] = radix_weight_[i + 1] * spec.factors()[i + 1];

  neg_.resize(size_);
  order_.resize(size_);
  for (int a = 0; a < size_; ++a) {
    GroupElement g = element(static_cast<Elem>(a));
    GroupElement m = g;
    for (int i = 0; i < r; ++i) m.coords[i] = (spec.factors()[i] - g.coords[i]) % spec.factors()[i];
    neg_[a] = index(m);
    order_[a] = element_order(spec, g);
  }
  if (size_ <= kMaxTabulatedAdd) {
    add_table_.resize(static_cast<std::size_t>(size_) * size_);
    for (int a = 0; a < size_; ++a)
      for (int b = 0; b < size_; ++b) add_table_[static_cast<std::size_t>(a) * size_ + b] = add_slow(a, b);
  }
}

Elem Group::add_slow(Elem a, Elem b) const {
  Elem out = 0;
  for (int i = 0; i < spec_.rank(); ++i) {
    const int n = spec_.factors()[i];
    const int ca = static_cast<int>(a / radix_weight_[i]) % n;
    const int cb = static_cast<int>(b / radix_weight_[i]) % n;
    out += static_cast<Elem>(((ca + cb) % n) * radix_weight_[i]);
  }
  return out;
}

Elem Group::scale(Elem a, std::int64_t k) const {
  const int ord = order_[a];
  k %= ord;
  if (k < 0) k += ord;
  Elem out = zero();
  Elem base = a;
  while (k > 0) {
    if (k & 1) out = add(out, base);
    base = add(base, base);
    k >>= 1;
  }
  return out;
}

GroupElement Group::element(Elem a) const {
  GroupElement g;
  g.coords.resize(spec_.rank());
  for (int i = 0; i < spec_.rank(); ++i) g.coords[i] = static_cast<int>(a / radix_weight_[i]) % spec_.factors()[i];
  return g;
}

Elem Group::index(const GroupElement& g) const {
  if (!is_valid_element(spec_, g)) throw InvalidArgument("element not valid for group " + spec_.to_string());
  Elem out = 0;
  for (int i = 0; i < spec_.rank(); ++i) out += static_cast<Elem>(g.coords[i] * radix_weight_[i]);
  return out;
}

std::string Group::format(Elem a) const {
  const GroupElement g = element(a);
  std::string out = "(";
  for (std::size_t i = 0; i < g.coords.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(g.coords[i]);
  }
  return out + ")";
}

} // namespace zslab
