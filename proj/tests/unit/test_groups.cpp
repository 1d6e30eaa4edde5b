#include "doctest.h"

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "zslab/error.hpp"
#include "zslab/group.hpp"

using namespace zslab;

TEST_CASE("normalize_group examples") {
  CHECK(normalize_group({3, 3}).factors() == std::vector<int>{3, 3});
  CHECK(normalize_group({2, 3}).factors() == std::vector<int>{6});
  CHECK(normalize_group({4, 2, 3}).factors() == std::vector<int>{2, 12});
  CHECK_THROWS_AS(normalize_group({1, 3}), InvalidArgument);
  CHECK(normalize_group({}).cardinality() == 1);
  CHECK(GroupSpec::parse("4,2,3") == normalize_group({2, 12}));
  CHECK(GroupSpec::parse("1").rank() == 0);
  CHECK_THROWS_AS(GroupSpec::parse("2,x"), InvalidArgument);
  CHECK_THROWS_AS(GroupSpec::parse("2,,3"), InvalidArgument);
  CHECK(GroupSpec::parse("4,2,3").to_string() == "2,12");
}

TEST_CASE("normalization is canonical, idempotent and order-insensitive") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(1, 4), ord(2, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> xs(len(rng));
    for (int& x : xs) x = ord(rng);
    const GroupSpec a = normalize_group(xs);
    auto shuffled = xs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(normalize_group(shuffled) == a);
    CHECK(normalize_group(a.factors()) == a);
    for (std::size_t i = 1; i < a.factors().size(); ++i) CHECK(a.factors()[i] % a.factors()[i - 1] == 0);
    long long prod = 1;
    for (int x : xs) prod *= x;
    CHECK(a.cardinality() == prod);
    CHECK(oracle::order_histogram(xs) == oracle::order_histogram(a.factors()));
  }
}

TEST_CASE("embedding maps input generators to an isomorphic copy") {
  for (const std::vector<int>& xs : std::vector<std::vector<int>>{{4, 2, 3}, {3, 3, 5}, {6, 10}, {2, 2, 2}, {4, 4, 4, 4}}) {
    const auto emb = normalize_with_embedding(xs);
    const auto group = Group::make(emb.group);
    // the images must generate the whole group with the right orders
    std::vector<Elem> imgs;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Elem e = group->index_of(emb.image_of_generator[i]);
      CHECK(group->order(e) == xs[i]);
      imgs.push_back(e);
    }
    std::vector<bool> hit(group->size(), false);
    std::vector<int> c(xs.size(), 0);
    int distinct = 0;
    for (;;) {
      Elem sum = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) sum = group->add(sum, group->scale(imgs[i], c[i]));
      if (!hit[sum]) ++distinct;
      hit[sum] = true;
      std::size_t i = 0;
      while (i < c.size() && ++c[i] == xs[i]) c[i++] = 0;
      if (i == c.size()) break;
    }
    CHECK(distinct == group->size());
  }
}

TEST_CASE("element_order examples and invariant for all groups up to 64") {
  CHECK(element_order(GroupSpec::parse("3,3"), {{1, 0}}) == 3);
  CHECK(element_order(GroupSpec::parse("4"), {{2}}) == 2);
  CHECK(element_order(GroupSpec::parse("2,12"), {{1, 3}}) == 4);
  CHECK_THROWS_AS(element_order(GroupSpec::parse("3"), {{3}}), InvalidArgument);
  for (int n = 1; n <= 64; ++n)
    for (const GroupSpec& spec : groups_of_order(n)) {
      const auto group = Group::make(spec);
      for (int a = 0; a < group->size(); ++a) {
        const int ord = group->order(a);
        CHECK(spec.exponent() % ord == 0);
        CHECK(group->scale(a, ord) == 0);
        if (ord > 1) {
          // (ord-1)*g computed by repeated addition, not by scale
          Elem acc = 0;
          for (int k = 0; k < ord - 1; ++k) acc = group->add(acc, a);
          CHECK(acc != 0);
        }
      }
    }
}

TEST_CASE("groups_of_order counts") {
  CHECK(groups_of_order(1).size() == 1);
  CHECK(groups_of_order(8).size() == 3);
  CHECK(groups_of_order(16).size() == 5);
  CHECK(groups_of_order(72).size() == 6);
}

TEST_CASE("classic invariants") {
  auto inv = classic_invariants(GroupSpec::parse("2,2,2"));
  CHECK(inv.dstar == 3);
  CHECK(inv.Dstar == 4);
  CHECK(inv.kstar == Rational(3, 2));
  CHECK(inv.total_rank == 3);
  inv = classic_invariants(GroupSpec::parse("6"));
  CHECK(inv.dstar == 5);
  CHECK(inv.kstar == Rational(7, 6));
  CHECK(inv.total_rank == 2);
  CHECK(classic_invariants(GroupSpec::parse("3,3")).Dstar == 5);
  inv = classic_invariants(GroupSpec{});
  CHECK(inv.dstar == 0);
  CHECK(inv.kstar == Rational(0));
  CHECK(inv.Dstar == 1);
}

TEST_CASE("Dstar >= exponent with equality iff cyclic") {
  for (int n = 2; n <= 100; ++n)
    for (const GroupSpec& spec : groups_of_order(n)) {
      const auto inv = classic_invariants(spec);
      CHECK(inv.Dstar >= spec.exponent());
      CHECK((inv.Dstar == spec.exponent()) == (spec.rank() == 1));
    }
}

TEST_CASE("exp * kstar >= dstar, equality exactly for homocyclic p-groups") {
  for (int n = 2; n <= 100; ++n)
    for (const GroupSpec& spec : groups_of_order(n)) {
      const auto inv = classic_invariants(spec);
      const Rational lhs = Rational(spec.exponent()) * inv.kstar;
      CHECK(lhs >= Rational(inv.dstar));
      const auto& f = spec.factors();
      const bool homocyclic_p = std::all_of(f.begin(), f.end(), [&](int x) { return x == f.front(); }) &&
                                factorize(f.front()).size() == 1;
      CHECK((lhs == Rational(inv.dstar)) == homocyclic_p);
    }
}

TEST_CASE("number theory helpers") {
  CHECK(legendre_totient(5, 10) == 2);
  CHECK(legendre_totient(10, 10) == 4);
  for (int n = 1; n <= 300; ++n) {
    CHECK(legendre_totient(1, n) == 1);
    CHECK(legendre_totient(n, n) == euler_phi(n));
    for (int m = 1; m <= n; m += 7) CHECK(legendre_totient(m, n) == oracle::brute_legendre(m, n));
  }
  CHECK_THROWS_AS(legendre_totient(11, 10), InvalidArgument);
  CHECK_THROWS_AS(legendre_totient(0, 10), InvalidArgument);
  CHECK(omega_distinct_primes(12) == 2);
  CHECK(omega_distinct_primes(1) == 0);
  CHECK(omega_distinct_primes(30030) == 6);
  CHECK(divisors(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
}

TEST_CASE("group tables") {
  const auto g = Group::make(GroupSpec::parse("2,12"));
  CHECK(g->size() == 24);
  const Elem a = g->index_of({1, 3});
  CHECK(g->element(a).coords == std::vector<int>{1, 3});
  CHECK(g->add(a, g->neg(a)) == 0);
  CHECK(g->format(a) == "(1,3)");
  // index order equals lexicographic order
  for (int x = 0; x + 1 < g->size(); ++x) CHECK(g->element(x) < g->element(x + 1));
  const auto big = Group::make(GroupSpec::parse("4,4,4,4,4"));
  CHECK(big->add(big->index_of({1, 2, 3, 0, 1}), big->index_of({3, 3, 3, 3, 3})) == big->index_of({0, 1, 2, 3, 0}));
}
