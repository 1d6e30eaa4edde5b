#include "doctest.h"

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "zslab/error.hpp"
#include "zslab/factorization.hpp"
#include "zslab/parallel.hpp"
#include "zslab/tame.hpp"

using namespace zslab;
namespace fs = std::filesystem;

namespace {

Sequence seq(const GroupPtr& g, std::initializer_list<std::pair<std::vector<int>, int>> pairs) {
  std::vector<std::pair<GroupElement, int>> v;
  for (const auto& [c, m] : pairs) v.emplace_back(GroupElement{c}, m);
  return Sequence::from_pairs(g, v);
}

Sequence scaled(const Sequence& s, int k) {
  Sequence out(s.group());
  for (Elem g : s.support()) out.add(s.group()->scale(g, k), s.multiplicity(g));
  return out;
}

} // namespace

TEST_CASE("minimal covers match the brute-force enumeration") {
  for (const char* spec : {"3", "4", "2,2", "5", "2,2,2"}) {
    CAPTURE(spec);
    const auto g = Group::make(GroupSpec::parse(spec));
    const auto table = enumerate_atoms(g);
    const auto atoms = oracle::brute_atoms(g);
    for (const Sequence& u : table->atoms()) {
      CAPTURE(u.to_string());
      const auto mine = enumerate_minimal_covers(u, table, u.length());
      const auto ref = oracle::brute_minimal_covers(u, atoms, u.length());
      CHECK(mine.size() == ref.size());
      for (const auto& c : mine) {
        CHECK(verify_cover(c).ok);
        CHECK(c.m() <= u.length());
      }
      int max_m = 0;
      for (const auto& c : ref) max_m = std::max(max_m, static_cast<int>(c.size()));
      CHECK(omega_local(u, table) == max_m);
    }
  }
}

TEST_CASE("local tame degrees match the brute-force oracle") {
  for (const char* spec : {"2", "3", "4", "2,2", "5", "6", "2,2,2"}) {
    CAPTURE(spec);
    const auto g = Group::make(GroupSpec::parse(spec));
    const auto table = enumerate_atoms(g);
    const auto atoms = oracle::brute_atoms(g);
    int global = 0;
    for (const Sequence& u : table->atoms()) {
      CAPTURE(u.to_string());
      const TameResult r = t_local(u, table);
      CHECK(r.value == oracle::brute_t_local(u, atoms));
      global = std::max(global, r.value);
      if (r.value > 0) {
        REQUIRE(r.certificate);
        CHECK(verify_cover(*r.certificate).ok);
        CHECK(r.certificate->value == r.value);
        CHECK(r.certificate->u == u);
      }
    }
    CHECK(t_global(GroupSpec::parse(spec)).value == global);
  }
}

TEST_CASE("Krull local values match the splitting oracle") {
  for (const char* spec : {"3", "4", "2,2", "2,2,2"}) {
    CAPTURE(spec);
    const auto g = Group::make(GroupSpec::parse(spec));
    const auto table = enumerate_atoms(g);
    const auto atoms = oracle::brute_atoms(g);
    int global = 0;
    for (const Sequence& u : table->atoms()) {
      CAPTURE(u.to_string());
      if (u.length() < 3) {
        CHECK_THROWS_AS(t_krull_local(u, table), HypothesisError);
        global = std::max(global, oracle::brute_t_krull_local(u, atoms));
        continue;
      }
      const int value = t_krull_local(u, table).value;
      CHECK(value == oracle::brute_t_krull_local(u, atoms));
      CHECK(value >= t_local(u, table).value);
      global = std::max(global, value);
    }
    CHECK(t_krull(GroupSpec::parse(spec)).value == global);
  }
  const auto c2 = Group::make(GroupSpec::parse("2"));
  CHECK_THROWS_AS(t_krull_local(seq(c2, {{{1}, 2}}), enumerate_atoms(c2)), HypothesisError);
  CHECK(oracle::brute_t_krull_local(seq(c2, {{{1}, 2}}), oracle::brute_atoms(c2)) == t_krull(GroupSpec::parse("2")).value);
}

TEST_CASE("known global values") {
  CHECK(t_global(GroupSpec::parse("2")).value == 0);
  CHECK(t_global(GroupSpec::parse("3")).value == 3);
  CHECK(t_global(GroupSpec::parse("4")).value == 4);
  CHECK(t_global(GroupSpec::parse("2,2")).value == 3);
  CHECK(t_global(GroupSpec::parse("2,2,2")).value == 4);
  CHECK(t_global(GroupSpec::parse("5")).value == 6);
  CHECK(t_krull(GroupSpec::parse("2")).value == 2);
  CHECK(t_krull(GroupSpec::parse("2,2,2")).value == 5);
  CHECK(t_krull(GroupSpec::parse("5")).value == 6);
}

TEST_CASE("the U over C3^2 with W of length 19 has local value at least 7") {
  const auto g = Group::make(GroupSpec::parse("3,3"));
  const auto table = enumerate_atoms(g);
  const Sequence u = seq(g, {{{1, 0}, 2}, {{0, 1}, 2}, {{1, 1}, 1}});
  const TameResult r = t_local(u, table);
  CHECK(r.value >= 7);
  CHECK(r.value <= t_global(table).value);
}

TEST_CASE("property: local values are invariant under automorphisms") {
  std::mt19937_64 rng(0x7a3e);
  for (const char* spec : {"5", "7", "8", "3,3", "2,4"}) {
    CAPTURE(spec);
    const auto g = Group::make(GroupSpec::parse(spec));
    const auto table = enumerate_atoms(g);
    const int exp = g->spec().exponent();
    std::uniform_int_distribution<int> pick(0, table->size() - 1);
    std::uniform_int_distribution<int> unit(1, exp - 1);
    for (int trial = 0; trial < 8; ++trial) {
      const Sequence& u = table->atom(pick(rng));
      int k = unit(rng);
      while (std::gcd(k, exp) != 1) k = unit(rng);
      CAPTURE(u.to_string());
      CAPTURE(k);
      const int value = t_local(u, table).value;
      CHECK(t_local(scaled(u, k), table).value == value);
      CHECK(t_local(u.negated(), table).value == value);
    }
  }
}

TEST_CASE("property: cover values respect the length bounds") {
  // max{m, 1 + min L(W)} with min L(W) >= ceil(|W| / D)
  std::mt19937_64 rng(0xc0fe);
  for (const char* spec : {"4", "2,2,2", "6", "3,3"}) {
    const auto g = Group::make(GroupSpec::parse(spec));
    const auto table = enumerate_atoms(g);
    std::uniform_int_distribution<int> pick(0, table->size() - 1);
    for (int trial = 0; trial < 10; ++trial) {
      const Sequence& u = table->atom(pick(rng));
      for (const CoverConfig& c : enumerate_minimal_covers(u, table, 3)) {
        REQUIRE(c.min_len_w);
        const int d = table->davenport();
        CHECK(*c.min_len_w >= (c.w.length() + d - 1) / d);
        CHECK(*c.min_len_w <= c.w.length() / 2 + (c.w.empty() ? 0 : 1));
        CHECK(c.value == std::max(c.m(), 1 + *c.min_len_w));
      }
    }
  }
}

TEST_CASE("make_cover and verify_cover reject bad input") {
  const auto g = Group::make(GroupSpec::parse("2,2"));
  const Sequence u = seq(g, {{{1, 0}, 1}, {{0, 1}, 1}, {{1, 1}, 1}});
  const Sequence a = seq(g, {{{1, 0}, 2}});
  const Sequence b = seq(g, {{{0, 1}, 2}});
  const Sequence c = seq(g, {{{1, 1}, 2}});
  CHECK_THROWS_AS(make_cover(u, {a, b}), InvalidArgument);
  const CoverConfig ok = make_cover(u, {a, b, c});
  CHECK(verify_cover(ok).ok);
  CHECK(ok.value == 3);
  // one atom too many: U already divides a proper subproduct
  const CoverConfig extra = make_cover(u, {a, b, c, a});
  CHECK_FALSE(verify_cover(extra).ok);
  CoverConfig tampered = ok;
  tampered.value = 4;
  CHECK_FALSE(verify_cover(tampered).ok);
  CoverConfig not_atom = ok;
  not_atom.covers[0] = seq(g, {{{1, 0}, 4}});
  CHECK_FALSE(verify_cover(not_atom).ok);
}

TEST_CASE("cover JSON round trip") {
  const auto g = Group::make(GroupSpec::parse("3,3"));
  const auto table = enumerate_atoms(g);
  const TameResult r = t_local(seq(g, {{{1, 0}, 2}, {{0, 1}, 2}, {{1, 1}, 1}}), table);
  REQUIRE(r.certificate);
  const CoverConfig back = CoverConfig::from_json(g, r.certificate->to_json());
  CHECK(back.u == r.certificate->u);
  CHECK(back.w == r.certificate->w);
  CHECK(back.value == r.certificate->value);
  CHECK(back.to_json() == r.certificate->to_json());
  CHECK_THROWS_AS(CoverConfig::from_json(g, nlohmann::json::array()), InvalidArgument);
}

TEST_CASE("thread count and cache do not change results") {
  const GroupSpec spec = GroupSpec::parse("2,2,2");
  const TameResult one = t_global(spec);
  SearchOptions many;
  many.parallel.threads = 3;
  const TameResult three = t_global(spec, many);
  CHECK(one.value == three.value);
  REQUIRE(one.certificate);
  REQUIRE(three.certificate);
  CHECK(one.certificate->to_json() == three.certificate->to_json());

  const fs::path dir = fs::temp_directory_path() / "zslab_tame_cache_test";
  fs::remove_all(dir);
  SearchOptions cached;
  cached.cache_dir = dir.string();
  CHECK(t_global(spec, cached).value == one.value);  // cold
  CHECK(t_global(spec, cached).value == one.value);  // warm
  CHECK(t_krull(spec, cached).value == t_krull(spec).value);
  fs::remove_all(dir);
}

TEST_CASE("a tiny budget yields a partial result with a usable bound") {
  SearchOptions opts;
  opts.budget_seconds = 1e-4;
  try {
    (void)t_global(GroupSpec::parse("2,2,2,2"), opts);
    FAIL("expected the budget to run out");
  } catch (const PartialResult& e) {
    CHECK(e.best_lower_bound() <= 9);
    CHECK(e.frontier().is_array());
    if (!e.certificate().is_null()) {
      const auto g = Group::make(GroupSpec::parse("2,2,2,2"));
      const CoverConfig c = CoverConfig::from_json(g, e.certificate());
      CHECK(verify_cover(c).ok);
      CHECK(c.value == e.best_lower_bound());
    }
  }
}
