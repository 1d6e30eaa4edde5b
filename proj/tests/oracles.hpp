#pragma once
// Brute-force reference implementations used only by the tests. They share
// nothing with the library's search code beyond group arithmetic.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "zslab/group.hpp"
#include "zslab/sequence.hpp"

namespace oracle {

using zslab::Elem;
using zslab::Group;
using zslab::Sequence;

// Sums of all nonempty sub-multisets, by walking the 2^|S| index subsets.
inline std::set<Elem> subsums_by_subsets(const Sequence& s) {
  const auto terms = s.terms();
  if (terms.size() > 20) throw std::runtime_error("oracle limited to 20 terms");
  const Group& g = *s.group();
  std::set<Elem> out;
  for (std::uint32_t mask = 1; mask < (1U << terms.size()); ++mask) {
    Elem sum = 0;
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (mask >> i & 1U) sum = g.add(sum, terms[i]);
    out.insert(sum);
  }
  return out;
}

inline bool minimal_by_subsets(const Sequence& s) {
  const auto terms = s.terms();
  if (terms.empty() || terms.size() > 20) return false;
  const Group& g = *s.group();
  const std::uint32_t full = (1U << terms.size()) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    Elem sum = 0;
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (mask >> i & 1U) sum = g.add(sum, terms[i]);
    if (sum == 0 && mask != full) return false;
    if (mask == full && sum != 0) return false;
  }
  return true;
}

// Every sequence over G\{0} with v_g <= ord(g) and length <= max_len.
inline void for_each_bounded_sequence(const zslab::GroupPtr& group, int max_len, const std::function<void(const Sequence&)>& fn) {
  const int n = group->size();
  Sequence cur(group);
  std::function<void(int, int)> rec = [&](int elem, int room) {
    if (elem == n) {
      fn(cur);
      return;
    }
    const int cap = std::min(room, group->order(static_cast<Elem>(elem)));
    for (int k = 0; k <= cap; ++k) {
      if (k) cur.add(static_cast<Elem>(elem));
      rec(elem + 1, room - k);
    }
    if (cap > 0) cur.remove(static_cast<Elem>(elem), cap);
  };
  rec(1, max_len);
}

// Element-order histogram; two finite abelian groups are isomorphic iff
// these agree.
inline std::map<int, int> order_histogram(const std::vector<int>& cyclic) {
  std::map<int, int> hist;
  std::vector<int> c(cyclic.size(), 0);
  for (;;) {
    long long ord = 1;
    for (std::size_t i = 0; i < c.size(); ++i) ord = std::lcm(ord, static_cast<long long>(cyclic[i] / std::gcd(c[i], cyclic[i])));
    ++hist[static_cast<int>(ord)];
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == cyclic[i]) c[i++] = 0;
    if (i == c.size()) break;
  }
  return hist;
}

inline long long brute_legendre(long long m, long long n) {
  long long c = 0;
  for (long long a = 1; a <= m; ++a)
    if (std::gcd(a, n) == 1) ++c;
  return c;
}

// Random zero-sum sequence over G\{0} of the given length (length >= 2).
// Lengths that admit no such sequence (odd lengths over C2) are bumped by one.
inline Sequence random_zero_sum(const zslab::GroupPtr& group, int length, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, group->size() - 1);
  for (int attempt = 0;; ++attempt) {
    if (attempt == 1000) {
      ++length;
      attempt = 0;
    }
    Sequence s(group);
    Elem sum = 0;
    for (int i = 0; i + 1 < length; ++i) {
      const Elem g = static_cast<Elem>(pick(rng));
      s.add(g);
      sum = group->add(sum, g);
    }
    const Elem last = group->neg(sum);
    if (last == 0) continue;
    s.add(last);
    return s;
  }
}

inline Sequence random_sequence(const zslab::GroupPtr& group, int length, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, group->size() - 1);
  Sequence s(group);
  for (int i = 0; i < length; ++i) s.add(static_cast<Elem>(pick(rng)));
  return s;
}

// Atoms by filtering every bounded sequence of length <= |G|.
inline std::vector<Sequence> brute_atoms(const zslab::GroupPtr& group) {
  std::vector<Sequence> out;
  for_each_bounded_sequence(group, group->size(), [&](const Sequence& s) {
    if (minimal_by_subsets(s)) out.push_back(s);
  });
  return out;
}

inline bool divides_seq(const Sequence& a, const Sequence& b) {
  for (std::size_t g = 0; g < a.counts().size(); ++g)
    if (a.counts()[g] > b.counts()[g]) return false;
  return true;
}

// min L by trying every atom in non-decreasing index order, memoized on the
// remainder's text.
class MinLength {
public:
  explicit MinLength(std::vector<Sequence> atoms) : atoms_(std::move(atoms)) {}
  int operator()(const Sequence& s) { return rec(s, 0); }

private:
  int rec(const Sequence& rest, std::size_t from) {
    if (rest.empty()) return 0;
    const std::string key = rest.to_string() + "#" + std::to_string(from);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int best = 1 << 20;
    for (std::size_t i = from; i < atoms_.size(); ++i)
      if (divides_seq(atoms_[i], rest)) best = std::min(best, 1 + rec(rest.over(atoms_[i]), i));
    memo_[key] = best;
    return best;
  }
  std::vector<Sequence> atoms_;
  std::map<std::string, int> memo_;
};

// Multisets of at most max_m atoms whose product U divides while no product
// with one atom removed does.
inline std::vector<std::vector<Sequence>> brute_minimal_covers(const Sequence& u, const std::vector<Sequence>& atoms, int max_m) {
  std::vector<std::vector<Sequence>> out;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (!pick.empty()) {
      Sequence prod(u.group());
      for (auto i : pick) prod = prod.times(atoms[i]);
      if (divides_seq(u, prod)) {
        bool minimal = true;
        for (std::size_t drop = 0; drop < pick.size() && minimal; ++drop) {
          Sequence sub(u.group());
          for (std::size_t k = 0; k < pick.size(); ++k)
            if (k != drop) sub = sub.times(atoms[pick[k]]);
          if (divides_seq(u, sub)) minimal = false;
        }
        if (minimal) {
          std::vector<Sequence> c;
          for (auto i : pick) c.push_back(atoms[i]);
          out.push_back(c);
        }
        return;  // supersets are never minimal
      }
    }
    if (static_cast<int>(pick.size()) == max_m) return;
    for (std::size_t i = from; i < atoms.size(); ++i) {
      pick.push_back(i);
      rec(i);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

// max over minimal covers of max{m, 1 + min L(W)}; 0 for a prime U.
inline int brute_t_local(const Sequence& u, const std::vector<Sequence>& atoms) {
  const auto covers = brute_minimal_covers(u, atoms, u.length());
  MinLength min_len(atoms);
  int best = 0;
  for (const auto& c : covers) {
    if (c.size() == 1) continue;  // U itself
    Sequence prod(u.group());
    for (const auto& v : c) prod = prod.times(v);
    best = std::max({best, static_cast<int>(c.size()), 1 + min_len(prod.over(u))});
  }
  return best;
}

// Every way to split the expanded term list into nonempty blocks.
inline void set_partitions(const std::vector<Elem>& terms, const std::function<void(const std::vector<std::vector<Elem>>&)>& fn) {
  std::vector<std::vector<Elem>> blocks;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == terms.size()) {
      fn(blocks);
      return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      blocks[b].push_back(terms[i]);
      rec(i + 1);
      blocks[b].pop_back();
    }
    blocks.push_back({terms[i]});
    rec(i + 1);
    blocks.pop_back();
  };
  rec(0);
}

// Krull monoid with many primes per class: max of |U| and, over splittings
// U = S_1...S_m and nonempty A_i with S_i A_i an atom, of 1 + min L(prod A_i).
inline int brute_t_krull_local(const Sequence& u, const std::vector<Sequence>& atoms) {
  MinLength min_len(atoms);
  int best = u.length();
  set_partitions(u.terms(), [&](const std::vector<std::vector<Elem>>& blocks) {
    std::vector<std::vector<Sequence>> options;
    for (const auto& b : blocks) {
      const Sequence part = Sequence::from_terms(u.group(), b);
      std::vector<Sequence> rests;
      for (const auto& v : atoms)
        if (divides_seq(part, v) && v.length() > part.length()) rests.push_back(v.over(part));
      if (rests.empty()) return;
      options.push_back(std::move(rests));
    }
    std::vector<std::size_t> idx(options.size(), 0);
    for (;;) {
      Sequence prod(u.group());
      for (std::size_t k = 0; k < options.size(); ++k) prod = prod.times(options[k][idx[k]]);
      best = std::max(best, 1 + min_len(prod));
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  });
  return best;
}

} // namespace oracle
