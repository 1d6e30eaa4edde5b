#include "doctest.h"

#include <random>
#include <set>

#include "oracles.hpp"
#include "zslab/error.hpp"
#include "zslab/factorization.hpp"

using namespace zslab;

namespace {

Sequence seq(const GroupPtr& g, std::initializer_list<std::pair<std::vector<int>, int>> pairs) {
  std::vector<std::pair<GroupElement, int>> v;
  for (const auto& [c, m] : pairs) v.emplace_back(GroupElement{c}, m);
  return Sequence::from_pairs(g, v);
}

// Independent length-set oracle: every factorization, by recursion over
// the full atom list with non-decreasing indices (no least-element rule).
void brute_lengths(const TablePtr& t, Sequence rest, int from, int len, std::set<int>& out) {
  if (rest.empty()) {
    out.insert(len);
    return;
  }
  for (int i = from; i < t->size(); ++i)
    if (divides(t->atom(i), rest)) brute_lengths(t, rest.over(t->atom(i)), i, len + 1, out);
}

} // namespace

TEST_CASE("factorizations over C3") {
  const auto c3 = Group::make(GroupSpec::parse("3"));
  const auto t = enumerate_atoms(c3);
  const Sequence s = seq(c3, {{{1}, 3}, {{2}, 3}});
  const auto zs = enumerate_factorizations(s, t);
  CHECK(zs.size() == 2);
  CHECK(length_set(s, t) == std::vector<int>{2, 3});
  CHECK(min_length(s, t) == 2);
  CHECK(min_length_oracle(s, t) == 2);
  const auto& a = zs[0].length() == 3 ? zs[0] : zs[1];
  const auto& b = zs[0].length() == 3 ? zs[1] : zs[0];
  CHECK(distance(a, b) == 3);
  CHECK(distance(a, a) == 0);
  for (const auto& z : zs) CHECK(z.product() == s);
  CHECK(enumerate_factorizations(Sequence(c3), t).size() == 1);
  CHECK(length_set(Sequence(c3), t) == std::vector<int>{0});
  CHECK_THROWS_AS(length_set(seq(c3, {{{1}, 2}}), t), InvalidArgument);
}

TEST_CASE("C2 min length") {
  const auto c2 = Group::make(GroupSpec::parse("2"));
  CHECK(min_length(seq(c2, {{{1}, 6}}), enumerate_atoms(c2)) == 3);
}

TEST_CASE("C4^2 example with exactly four factorizations") {
  const auto g = Group::make(GroupSpec::parse("4,4"));
  const auto t = enumerate_atoms(g);
  // (-e1-e2)^18 (2e1-e2)^3 (-e1+2e2)^3 (e1+e2)^3
  const Sequence w = seq(g, {{{3, 3}, 18}, {{2, 3}, 3}, {{3, 2}, 3}, {{1, 1}, 3}});
  const auto zs = enumerate_factorizations(w, t);
  REQUIRE(zs.size() == 4);
  auto idx = [&](std::initializer_list<std::pair<std::vector<int>, int>> p) { return *t->find(seq(g, p)); };
  const int s1 = idx({{{1, 1}, 1}, {{2, 3}, 3}, {{3, 2}, 3}});
  const int s2 = idx({{{1, 1}, 2}, {{2, 3}, 2}, {{3, 2}, 2}});
  const int s3 = idx({{{1, 1}, 3}, {{2, 3}, 1}, {{3, 2}, 1}});
  const int s4 = idx({{{3, 3}, 1}, {{2, 3}, 1}, {{3, 2}, 1}});
  const int s5 = idx({{{3, 3}, 1}, {{1, 1}, 1}});
  const int s6 = idx({{{3, 3}, 4}});
  std::set<std::map<int, int>> expect{
      {{s1, 1}, {s5, 2}, {s6, 4}}, {{s3, 1}, {s4, 2}, {s6, 4}}, {{s2, 1}, {s4, 1}, {s5, 1}, {s6, 4}}, {{s4, 3}, {s5, 3}, {s6, 3}}};
  std::set<std::map<int, int>> got;
  for (const auto& z : zs) got.insert(z.parts);
  CHECK(got == expect);
  CHECK(length_set(w, t) == std::vector<int>{7, 9});
  CHECK(min_length(w, t) == 7);
}

TEST_CASE("C3^2 example of length 19") {
  const auto g = Group::make(GroupSpec::parse("3,3"));
  const auto t = enumerate_atoms(g);
  const Sequence w = seq(g, {{{2, 2}, 8}, {{1, 2}, 5}, {{2, 1}, 4}, {{2, 0}, 2}});
  CHECK(w.length() == 19);
  CHECK(min_length(w, t) == 6);
  std::set<int> brute;
  brute_lengths(t, w, 0, 0, brute);
  CHECK(*brute.begin() == 6);
  CHECK_THROWS_AS(min_length_oracle(w, t), InvalidArgument);
}

TEST_CASE("min_length agrees with the full-enumeration oracle") {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 9; ++n)
    for (const GroupSpec& spec : groups_of_order(n)) {
      const auto g = Group::make(spec);
      const auto t = enumerate_atoms(g);
      LengthEngine engine(t);
      for (int trial = 0; trial < 200; ++trial) {
        const Sequence s = oracle::random_zero_sum(g, 2 + static_cast<int>(rng() % 11), rng);
        const int ml = engine.min_length(s);
        CHECK(ml == min_length_oracle(s, t));
        std::set<int> brute;
        brute_lengths(t, s, 0, 0, brute);
        const auto ls = engine.length_set(s);
        CHECK(std::set<int>(ls.begin(), ls.end()) == brute);
        const int dav = t->davenport();
        CHECK(ml >= (s.length() + dav - 1) / dav);
        CHECK(ml <= s.length() / 2);
      }
    }
}

TEST_CASE("length sets are superadditive under products") {
  std::mt19937_64 rng(22);
  const auto g = Group::make(GroupSpec::parse("2,4"));
  const auto t = enumerate_atoms(g);
  LengthEngine engine(t);
  for (int trial = 0; trial < 60; ++trial) {
    const Sequence a = oracle::random_zero_sum(g, 2 + static_cast<int>(rng() % 6), rng);
    const Sequence b = oracle::random_zero_sum(g, 2 + static_cast<int>(rng() % 6), rng);
    const auto la = engine.length_set(a), lb = engine.length_set(b), lab = engine.length_set(a.times(b));
    const std::set<int> prod(lab.begin(), lab.end());
    for (int x : la)
      for (int y : lb) CHECK(prod.count(x + y) == 1);
  }
}

TEST_CASE("distance is a metric") {
  std::mt19937_64 rng(23);
  const auto g = Group::make(GroupSpec::parse("3,3"));
  const auto t = enumerate_atoms(g);
  std::vector<Factorization> pool;
  for (int trial = 0; trial < 30; ++trial) {
    const Sequence s = oracle::random_zero_sum(g, 4 + static_cast<int>(rng() % 6), rng);
    for (auto& z : enumerate_factorizations(s, t)) pool.push_back(z);
  }
  REQUIRE(pool.size() > 10);
  for (int trial = 0; trial < 500; ++trial) {
    const auto& x = pool[rng() % pool.size()];
    const auto& y = pool[rng() % pool.size()];
    const auto& z = pool[rng() % pool.size()];
    CHECK(distance(x, x) == 0);
    CHECK(distance(x, y) == distance(y, x));
    CHECK(distance(x, z) <= distance(x, y) + distance(y, z));
  }
  const auto other = enumerate_atoms(Group::make(GroupSpec::parse("3")));
  Factorization foreign{other, {{0, 1}}};
  CHECK_THROWS_AS(distance(pool[0], foreign), InvalidArgument);
}

TEST_CASE("independent coordinates: lengths add and min length has a closed form") {
  // W = prod_i (e_i (-e_i))^k over a basis of C_n^r
  for (const auto& [gs, k] : std::vector<std::pair<const char*, int>>{{"3,3", 4}, {"4,4", 5}, {"3,3,3", 3}, {"5,5", 6}}) {
    const auto g = Group::make(GroupSpec::parse(gs));
    const int n = g->spec().factors()[0];
    const int r = g->spec().rank();
    const auto t = enumerate_atoms(g);
    LengthEngine engine(t);
    Sequence w(g);
    std::set<int> sum{0};
    int closed = 0;
    for (int i = 0; i < r; ++i) {
      std::vector<int> e(r, 0), ne(r, 0);
      e[i] = 1;
      ne[i] = n - 1;
      const Sequence coord = seq(g, {{e, k}, {ne, k}});
      w = w.times(coord);
      const auto li = engine.length_set(coord);
      std::set<int> next;
      for (int a : sum)
        for (int b : li) next.insert(a + b);
      sum = next;
      // j blocks e^n, (-e)^n, the remaining pairs as e(-e)
      closed += 2 * (k / n) + (k % n);
    }
    const auto lw = engine.length_set(w);
    CHECK(std::set<int>(lw.begin(), lw.end()) == sum);
    CHECK(engine.min_length(w) == closed);
  }
}
