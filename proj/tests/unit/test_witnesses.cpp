#include "doctest.h"

#include <numeric>
#include <random>

#include "zslab/error.hpp"
#include "zslab/factorization.hpp"
#include "zslab/witnesses.hpp"

using namespace zslab;

namespace {

bool check_named(const Witness& w, const std::string& what) {
  for (const auto& [name, ok] : w.checks)
    if (name == what) return ok;
  FAIL("no check named " << what);
  return false;
}

// Random matrix over Z_n with unit determinant (2x2) by rejection.
Basis random_basis2(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (;;) {
    Basis b{{pick(rng), pick(rng)}, {pick(rng), pick(rng)}};
    const int det = ((b[0][0] * b[1][1] - b[0][1] * b[1][0]) % n + n) % n;
    if (std::gcd(det, n) == 1) return b;
  }
}

// Random invertible r x r matrix over F_2 by Gaussian elimination check.
Basis random_basis_f2(int r, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> bit(0, 1);
  for (;;) {
    Basis b(r, std::vector<int>(r));
    for (auto& row : b)
      for (int& x : row) x = bit(rng);
    auto m = b;
    int rank = 0;
    for (int col = 0; col < r; ++col) {
      int piv = -1;
      for (int i = rank; i < r; ++i)
        if (m[i][col]) piv = i;
      if (piv < 0) continue;
      std::swap(m[piv], m[rank]);
      for (int i = 0; i < r; ++i)
        if (i != rank && m[i][col])
          for (int k = 0; k < r; ++k) m[i][k] ^= m[rank][k];
      ++rank;
    }
    if (rank == r) return b;
  }
}

} // namespace

TEST_CASE("cyclic qm witnesses for every admissible pair up to 12") {
  int count = 0;
  for (int n = 5; n <= 12; ++n)
    for (int q = 2; q <= n - 2; ++q) {
      if (std::gcd(q, n) != 1) continue;
      CAPTURE(n);
      CAPTURE(q);
      const Witness w = witness_cyclic_qm(n, q);
      const int m = n / q;
      CHECK(w.verified());
      CHECK(w.claimed_value == n + (q - 1) * (m - 1));
      CHECK(w.cover.value == w.claimed_value);
      CHECK(check_named(w, "W has exactly one factorization"));
      CHECK(check_named(w, "U, U0, U1, V, V' pairwise distinct"));
      CHECK(verify_cover(w.cover).ok);
      ++count;
    }
  CHECK(count == 24);
  CHECK(witness_cyclic_qm(5, 2).cover.value == 6);
  CHECK(witness_cyclic_qm(7, 2).cover.value == 9);
}

TEST_CASE("cyclic qm witnesses with another generator") {
  for (int n : {5, 7, 9, 11})
    for (int gen = 2; gen < n; ++gen) {
      if (std::gcd(gen, n) != 1) continue;
      const Witness w = witness_cyclic_qm(n, 2, gen);
      CHECK(w.verified());
      CHECK(w.cover.value == witness_cyclic_qm(n, 2).cover.value);
    }
  CHECK_THROWS_AS(witness_cyclic_qm(9, 2, 3), HypothesisError);
  CHECK_THROWS_AS(witness_cyclic_qm(4, 2), HypothesisError);
  CHECK_THROWS_AS(witness_cyclic_qm(10, 4), HypothesisError);
  CHECK_THROWS_AS(witness_cyclic_qm(10, 9), HypothesisError);
}

TEST_CASE("witnesses never exceed the computed local value") {
  std::vector<Witness> ws;
  for (int n = 5; n <= 9; ++n)
    for (int q = 2; q <= n - 2; ++q)
      if (std::gcd(q, n) == 1) ws.push_back(witness_cyclic_qm(n, q));
  ws.push_back(witness_c33());
  ws.push_back(witness_dstar(GroupSpec::parse("3,3")));
  ws.push_back(witness_dstar(GroupSpec::parse("2,4")));
  ws.push_back(witness_rank(GroupSpec::parse("2,2,2,2")));
  for (const Witness& w : ws) {
    CAPTURE(w.name);
    CAPTURE(w.parameters.dump());
    const TablePtr table = enumerate_atoms(w.cover.u.group());
    CHECK(w.cover.value.value_or(0) <= t_local(w.cover.u, table).value);
  }
}

TEST_CASE("rank witnesses") {
  for (const char* spec : {"2,2,2,2", "3,3,3,3", "2,2,4,4"}) {
    CAPTURE(spec);
    const Witness w = witness_rank(GroupSpec::parse(spec));
    CHECK(w.verified());
    CHECK(w.cover.value == 9);
  }
  CHECK(witness_rank(GroupSpec::parse("2,2,2,2,2,2")).cover.value == 19);
  // with two basis elements the first covering atom is U itself
  const Witness small = witness_rank(GroupSpec::parse("2,2"));
  CHECK_FALSE(small.verified());
  CHECK_FALSE(check_named(small, "V_0 differs from U"));
  CHECK_THROWS_AS(witness_rank(GroupSpec::parse("2,2,2")), HypothesisError);
  CHECK_THROWS_AS(witness_rank(GroupSpec::parse("2,2,2,2"), {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {1, 1, 1, 0}}),
                  HypothesisError);
}

TEST_CASE("property: rank witness over C2^4 does not depend on the basis") {
  std::mt19937_64 rng(0xba515);
  for (int trial = 0; trial < 15; ++trial) {
    const Basis b = random_basis_f2(4, rng);
    const Witness w = witness_rank(GroupSpec::parse("2,2,2,2"), b);
    CHECK(w.verified());
    CHECK(w.cover.value == 9);
  }
}

TEST_CASE("the explicit covers over C3^2 and C4^2") {
  const Witness c33 = witness_c33();
  CHECK(c33.verified());
  CHECK(c33.cover.value == 7);
  CHECK(c33.cover.w.length() == 19);
  CHECK(c33.cover.min_len_w == 6);
  const Witness c44 = witness_c44();
  CHECK(c44.verified());
  CHECK(c44.cover.value == 8);
  const TablePtr t = atoms_dividing(c44.cover.w);
  CHECK(length_set(c44.cover.w, t) == std::vector<int>{7, 9});
  CHECK(enumerate_factorizations(c44.cover.w, t).size() == 4);
  CHECK(witness_c33({{1, 1}, {1, 2}}).cover.value == 7);
  CHECK(witness_c44({{1, 1}, {1, 2}}).cover.value == 8);
  CHECK_THROWS_AS(witness_c33({{1, 0}, {2, 0}}), HypothesisError);
  CHECK_THROWS_AS(witness_c44({{1, 0}}), InvalidArgument);
}

TEST_CASE("property: C3^2 and C4^2 covers survive random bases") {
  std::mt19937_64 rng(0xc3c4);
  for (int trial = 0; trial < 12; ++trial) {
    const Witness a = witness_c33(random_basis2(3, rng));
    CHECK(a.verified());
    CHECK(a.cover.value == 7);
    const Witness b = witness_c44(random_basis2(4, rng));
    CHECK(b.verified());
    CHECK(b.cover.value == 8);
  }
}

TEST_CASE("d* witnesses") {
  const std::vector<std::pair<const char*, int>> cases{{"5", 5}, {"2,2", 3}, {"3,3", 5}, {"2,4", 5}, {"2,2,2", 4}, {"6", 6}};
  for (auto [spec, value] : cases) {
    CAPTURE(spec);
    const Witness w = witness_dstar(GroupSpec::parse(spec));
    CHECK(w.verified());
    CHECK(w.cover.value == value);
    CHECK(value == 1 + classic_invariants(GroupSpec::parse(spec)).dstar);
  }
  CHECK_THROWS_AS(witness_dstar(GroupSpec::parse("1")), HypothesisError);
}

TEST_CASE("composed witnesses") {
  const Witness c33 = witness_c33();
  const Witness a = witness_compose(c33, witness_dstar(GroupSpec::parse("5")));
  CHECK(a.verified());
  CHECK(a.cover.value >= 7 + 5 - 1);
  CHECK(a.cover.value == 11);
  CHECK(a.cover.u.group()->spec() == GroupSpec::parse("3,15"));
  const Witness b = witness_compose(c33, c33);
  CHECK(b.verified());
  CHECK(b.cover.value == 13);
  const Witness c = witness_compose(witness_c44(), witness_c44());
  CHECK(c.verified());
  CHECK(c.cover.value == 15);
  for (const Witness* w : {&a, &b, &c}) CHECK(verify_cover(w->cover).ok);
  // a d* witness never beats D, so it only works as the second input
  CHECK_THROWS_AS(witness_compose(witness_dstar(GroupSpec::parse("5")), c33), HypothesisError);
}

TEST_CASE("Krull model witness") {
  const KrullWitness w = witness_c23_krull();
  CHECK(w.verified());
  CHECK(w.cover.value == 5);
  CHECK(w.cover.covers.size() == 4);
  CHECK(w.reduced_local_value == 4);
  CHECK(verify_model_cover(w.cover, w.model).ok);
  CHECK(w.to_json().at("verified").get<bool>());
}

TEST_CASE("witnesses by name") {
  for (const std::string& name : witness_names()) CHECK_FALSE(name.empty());
  const auto qm = make_witness("cyclic_qm", {{"n", 7}, {"q", 3}});
  CHECK(qm.at("verified").get<bool>());
  CHECK(qm.at("claimed_value").get<int>() == 7 + 2 * 1);
  CHECK(make_witness("rank", {{"group", "2,2,2,2"}}).at("claimed_value").get<int>() == 9);
  CHECK(make_witness("c33", {{"basis", {{1, 1}, {1, 2}}}}).at("verified").get<bool>());
  CHECK(make_witness("c23_krull", nlohmann::json::object()).at("verified").get<bool>());
  const auto comp = make_witness("compose", {{"first", {{"name", "c33"}}}, {"second", {{"name", "dstar"}, {"group", "5"}}}});
  CHECK(comp.at("verified").get<bool>());
  CHECK(comp.at("certificate").at("value").get<int>() == 11);
  CHECK_THROWS_AS(make_witness("nope", nlohmann::json::object()), InvalidArgument);
  CHECK_THROWS_AS(make_witness("rank", nlohmann::json::object()), InvalidArgument);
  CHECK_THROWS_AS(make_witness("cyclic_qm", {{"n", 7}}), InvalidArgument);
  CHECK_THROWS_AS(make_witness("compose", {{"first", {{"name", "c23_krull"}}}, {"second", {{"name", "c33"}}}}), InvalidArgument);
}
