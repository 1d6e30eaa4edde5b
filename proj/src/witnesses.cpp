#include "zslab/witnesses.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "zslab/error.hpp"

namespace zslab {

bool Witness::verified() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

namespace {

nlohmann::json checks_json(const std::vector<std::pair<std::string, bool>>& checks) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [what, ok] : checks) j.push_back({{"check", what}, {"ok", ok}});
  return j;
}

// Elements of the basis as indices; the standard basis when empty.
std::vector<Elem> basis_elements(const Group& group, const Basis& basis) {
  std::vector<Elem> out;
  const int r = group.spec().rank();
  if (basis.empty()) {
    for (int i = 0; i < r; ++i) {
      std::vector<int> c(r, 0);
      c[i] = 1;
      out.push_back(group.index_of(c));
    }
    return out;
  }
  for (const auto& coords : basis) out.push_back(group.index_of(coords));
  return out;
}

// Independent: the subgroup they generate has order prod ord(e_i).
bool independent(const Group& group, const std::vector<Elem>& elems) {
  std::int64_t expected = 1;
  for (Elem e : elems) expected *= group.order(e);
  std::set<Elem> span{Group::zero()};
  for (Elem e : elems) {
    std::set<Elem> next;
    for (Elem x : span)
      for (int k = 0; k < group.order(e); ++k) next.insert(group.add(x, group.scale(e, k)));
    span = std::move(next);
  }
  return static_cast<std::int64_t>(span.size()) == expected;
}

Sequence seq(const GroupPtr& group, const std::vector<std::pair<Elem, int>>& terms) {
  Sequence s(group);
  for (auto [g, k] : terms) s.add(g, k);
  return s;
}

void check_cover(Witness& w) {
  const CoverVerdict v = verify_cover(w.cover);
  w.check("minimal cover re-verified", v.ok);
  w.check("value " + std::to_string(w.cover.value.value_or(-1)) + " >= claimed " + std::to_string(w.claimed_value),
          w.cover.value.value_or(-1) >= w.claimed_value);
}

} // namespace

nlohmann::json Witness::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["parameters"] = parameters;
  j["group"] = cover.u.group()->spec().to_string();
  j["certificate"] = cover.to_json();
  j["claimed_value"] = claimed_value;
  j["checks"] = checks_json(checks);
  j["verified"] = verified();
  return j;
}

Witness witness_cyclic_qm(int n, int q, int generator) {
  if (n < 5) throw HypothesisError("witness_cyclic_qm: needs n >= 5");
  if (q < 2 || q > n - 2) throw HypothesisError("witness_cyclic_qm: q must lie in [2, n-2]");
  if (std::gcd(q, n) != 1) throw HypothesisError("witness_cyclic_qm: gcd(q, n) must be 1");
  if (std::gcd(generator, n) != 1) throw HypothesisError("witness_cyclic_qm: generator must have order n");
  const GroupPtr group = Group::make(GroupSpec::from_cyclic({n}));
  const int m = n / q;
  const Elem g = group->index_of({((generator % n) + n) % n});
  const Elem qg = group->scale(g, q), neg = group->neg(g);

  const Sequence u = seq(group, {{qg, n}});
  const Sequence u0 = seq(group, {{g, n}});
  const Sequence u1 = seq(group, {{neg, 1}, {g, 1}});
  const Sequence v = seq(group, {{qg, 1}, {g, n - q}});
  const Sequence v2 = seq(group, {{qg, 1}, {neg, q}});

  Witness w;
  w.name = "cyclic_qm";
  w.parameters = {{"n", n}, {"q", q}, {"m", m}, {"j", n - q * m}, {"generator", generator}};
  w.claimed_value = n + (q - 1) * (m - 1);
  std::vector<Sequence> covers(n - m, v);
  covers.insert(covers.end(), m, v2);
  w.cover = make_cover(u, covers);

  const std::vector<Sequence> named{u, u0, u1, v, v2};
  bool atoms = true, distinct = true;
  for (std::size_t i = 0; i < named.size(); ++i) {
    atoms = atoms && is_minimal_zero_sum(named[i]);
    for (std::size_t k = 0; k < i; ++k) distinct = distinct && !(named[i] == named[k]);
  }
  w.check("U, U0, U1, V, V' are atoms", atoms);
  w.check("U, U0, U1, V, V' pairwise distinct", distinct);
  {
    // U1^{qm} U0^{n-q-m}
    Sequence r2(group);
    for (int k = 0; k < q * m; ++k) r2 = r2.times(u1);
    for (int k = 0; k < n - q - m; ++k) r2 = r2.times(u0);
    w.check("W = U1^{qm} U0^{n-q-m}", r2 == w.cover.w);
    w.check("W has exactly one factorization", enumerate_factorizations(r2, atoms_dividing(r2)).size() == 1);
  }
  check_cover(w);
  w.check("value equals n + (q-1)(m-1)", w.cover.value == w.claimed_value);
  return w;
}

Witness witness_rank(const GroupSpec& spec, const Basis& basis) {
  const GroupPtr group = Group::make(spec);
  const std::vector<Elem> e = basis_elements(*group, basis);
  const int r = static_cast<int>(e.size());
  if (r == 0 || r % 2 != 0) throw HypothesisError("witness_rank: needs an even, nonzero number of basis elements");
  if (!independent(*group, e)) throw HypothesisError("witness_rank: basis elements are not independent");
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k)
      if (std::gcd(group->order(e[i]), group->order(e[k])) == 1)
        throw HypothesisError("witness_rank: orders of basis elements must pairwise share a factor");

  Elem e0 = Group::zero(), alt = Group::zero();
  for (int i = 0; i < r; ++i) {
    e0 = group->sub(e0, e[i]);
    alt = (i % 2 == 0) ? group->add(alt, e[i]) : group->sub(alt, e[i]);  // i is 0-based: e_1 is +
  }
  Sequence u(group);
  u.add(alt);
  for (int i = 0; i < r; ++i) {
    // 1-based odd indices get -e0-e_i, even ones e0+e_i
    if (i % 2 == 0) u.add(group->sub(group->neg(e0), e[i]));
    else u.add(group->add(e0, e[i]));
  }
  std::vector<Sequence> covers;
  {
    Sequence v0(group);
    v0.add(alt);
    for (int i = 0; i < r; ++i) v0.add(i % 2 == 0 ? group->neg(e[i]) : e[i]);
    covers.push_back(v0);
  }
  for (int i = 0; i < r; ++i) {
    Sequence v(group);
    if (i % 2 == 0) {
      v.add(group->sub(group->neg(e0), e[i]));
      for (int k = 0; k < r; ++k)
        if (k != i) v.add(group->neg(e[k]));
    } else {
      v.add(group->add(e0, e[i]));
      for (int k = 0; k < r; ++k)
        if (k != i) v.add(e[k]);
    }
    covers.push_back(v);
  }

  Witness w;
  w.name = "rank";
  w.parameters = {{"group", spec.to_string()}, {"r", r}};
  if (!basis.empty()) w.parameters["basis"] = basis;
  w.claimed_value = 1;
  for (Elem x : e) {
    const int ord = group->order(x);
    w.claimed_value += 2 * (r / (2 * ord)) + (r / 2) % ord;
  }
  w.cover = make_cover(u, covers);

  Sequence rest = u;
  rest.remove(alt);
  w.check("U is a minimal zero-sum sequence", is_minimal_zero_sum(u));
  w.check("U without its first term is zero-sum free", is_zero_sum_free(rest));
  Sequence expected_w(group);
  for (Elem x : e) {
    expected_w.add(x, r / 2);
    expected_w.add(group->neg(x), r / 2);
  }
  w.check("W = prod ((-e_i) e_i)^{r/2}", expected_w == w.cover.w);
  // at r = 2 the two sequences coincide and the cover is not minimal
  w.check("V_0 differs from U", !(covers[0] == u));
  check_cover(w);
  return w;
}

namespace {

struct Plane {
  GroupPtr group;
  Elem e1, e2;
  Elem at(int a, int b) const { return group->add(group->scale(e1, a), group->scale(e2, b)); }
};

Plane plane(int n, const Basis& basis) {
  Plane p;
  p.group = Group::make(GroupSpec::from_cyclic({n, n}));
  const auto e = basis_elements(*p.group, basis);
  if (e.size() != 2) throw InvalidArgument("basis must have two elements");
  if (!independent(*p.group, e) || p.group->order(e[0]) != n || p.group->order(e[1]) != n)
    throw HypothesisError("basis elements must be independent of order " + std::to_string(n));
  p.e1 = e[0];
  p.e2 = e[1];
  return p;
}

} // namespace

Witness witness_c33(const Basis& basis) {
  const Plane p = plane(3, basis);
  const GroupPtr& g = p.group;
  const Sequence v12 = seq(g, {{p.at(1, 0), 1}, {p.at(-1, -1), 2}, {p.at(-1, 1), 2}});
  const Sequence v34 = seq(g, {{p.at(0, 1), 1}, {p.at(-1, -1), 2}, {p.at(1, -1), 2}});
  const Sequence v5 = seq(g, {{p.at(1, 1), 1}, {p.at(-1, 0), 2}, {p.at(1, -1), 1}});
  const Sequence u = seq(g, {{p.at(1, 0), 2}, {p.at(0, 1), 2}, {p.at(1, 1), 1}});

  Witness w;
  w.name = "c33";
  w.parameters = nlohmann::json::object();
  if (!basis.empty()) w.parameters["basis"] = basis;
  w.claimed_value = 7;
  w.cover = make_cover(u, {v12, v12, v34, v34, v5});
  w.check("U, V_1..V_5 are atoms", is_minimal_zero_sum(u) && is_minimal_zero_sum(v12) && is_minimal_zero_sum(v34) &&
                                        is_minimal_zero_sum(v5));
  const Sequence expected_w = seq(g, {{p.at(-1, -1), 8}, {p.at(1, -1), 5}, {p.at(-1, 1), 4}, {p.at(-1, 0), 2}});
  w.check("W = (-e1-e2)^8 (e1-e2)^5 (e2-e1)^4 (-e1)^2", expected_w == w.cover.w);
  w.check("|W| = 19", w.cover.w.length() == 19);
  w.check("min L(W) = 6", w.cover.min_len_w == 6);
  check_cover(w);
  w.check("value >= D + 2 = 7", w.cover.value.value_or(0) >= 7);
  return w;
}

Witness witness_c44(const Basis& basis) {
  const Plane p = plane(4, basis);
  const GroupPtr& g = p.group;
  const Elem a = p.at(2, -1), b = p.at(-1, 2), s = p.at(1, 1), ns = p.at(-1, -1);
  const Sequence v1 = seq(g, {{p.at(1, 0), 1}, {ns, 3}, {a, 1}});
  const Sequence v4 = seq(g, {{p.at(0, 1), 1}, {ns, 3}, {b, 1}});
  const Sequence v7 = seq(g, {{s, 4}});
  const Sequence u = seq(g, {{p.at(1, 0), 3}, {p.at(0, 1), 3}, {s, 1}});

  Witness w;
  w.name = "c44";
  w.parameters = nlohmann::json::object();
  if (!basis.empty()) w.parameters["basis"] = basis;
  w.claimed_value = 8;
  w.cover = make_cover(u, {v1, v1, v1, v4, v4, v4, v7});
  w.check("U, V_1..V_7 are atoms",
          is_minimal_zero_sum(u) && is_minimal_zero_sum(v1) && is_minimal_zero_sum(v4) && is_minimal_zero_sum(v7));
  w.check("(2e1-e2)^3 (-e1+2e2)^3 is zero-sum free", is_zero_sum_free(seq(g, {{a, 3}, {b, 3}})));

  const std::vector<Sequence> atoms{seq(g, {{s, 1}, {a, 3}, {b, 3}}), seq(g, {{s, 2}, {a, 2}, {b, 2}}),
                                    seq(g, {{s, 3}, {a, 1}, {b, 1}}), seq(g, {{ns, 1}, {a, 1}, {b, 1}}),
                                    seq(g, {{ns, 1}, {s, 1}}),         seq(g, {{ns, 4}})};
  // S1 S5^2 S6^4, S3 S4^2 S6^4, S2 S4 S5 S6^4, S4^3 S5^3 S6^3 (indices into atoms)
  const std::vector<std::map<int, int>> listed{{{0, 1}, {4, 2}, {5, 4}},
                                               {{2, 1}, {3, 2}, {5, 4}},
                                               {{1, 1}, {3, 1}, {4, 1}, {5, 4}},
                                               {{3, 3}, {4, 3}, {5, 3}}};
  std::set<std::map<std::string, int>> expected;
  for (const auto& f : listed) {
    std::map<std::string, int> key;
    for (auto [i, k] : f) key[atoms[i].to_string()] = k;
    expected.insert(key);
  }
  const TablePtr table = atoms_dividing(w.cover.w);
  std::set<std::map<std::string, int>> found;
  for (const Factorization& z : enumerate_factorizations(w.cover.w, table)) {
    std::map<std::string, int> key;
    for (auto [i, k] : z.parts) key[table->atom(i).to_string()] = k;
    found.insert(key);
  }
  w.check("Z(W) is exactly the four listed factorizations", found == expected);
  w.check("L(W) = {7, 9}", length_set(w.cover.w, table) == std::vector<int>{7, 9});
  check_cover(w);
  w.check("value >= D + 1 = 8", w.cover.value.value_or(0) >= 8);
  return w;
}

Witness witness_dstar(const GroupSpec& spec) {
  if (spec.cardinality() == 1) throw HypothesisError("witness_dstar: group must be nontrivial");
  const GroupPtr group = Group::make(spec);
  const auto e = basis_elements(*group, {});
  Elem e0 = Group::zero();
  for (Elem x : e) e0 = group->add(e0, x);
  Sequence v1(group);
  v1.add(e0);
  for (Elem x : e) v1.add(x, group->order(x) - 1);
  const Sequence u = seq(group, {{e0, 1}, {group->neg(e0), 1}});

  Witness w;
  w.name = "dstar";
  w.parameters = {{"group", spec.to_string()}};
  w.claimed_value = 1 + classic_invariants(spec).dstar;
  w.cover = make_cover(u, {v1, v1.negated()});
  w.check("V_1 is an atom", is_minimal_zero_sum(v1));
  check_cover(w);
  w.check("value equals 1 + d*(G)", w.cover.value == w.claimed_value);
  return w;
}

namespace {

// Some split U = S_1...S_m with S_i | V_i and every S_i nonempty; returns the
// part that goes into covers[0].
std::vector<Elem> first_part(const CoverConfig& c) {
  const auto terms = c.u.terms();
  const int m = c.m();
  std::vector<std::vector<Count>> room;
  for (const auto& v : c.covers) room.push_back(v.counts());
  std::vector<int> assigned(terms.size(), -1), sizes(m, 0);
  std::function<bool(std::size_t)> place = [&](std::size_t i) {
    if (i == terms.size()) return std::all_of(sizes.begin(), sizes.end(), [](int s) { return s > 0; });
    for (int k = 0; k < m; ++k) {
      if (room[k][terms[i]] == 0) continue;
      --room[k][terms[i]];
      ++sizes[k];
      assigned[i] = k;
      if (place(i + 1)) return true;
      ++room[k][terms[i]];
      --sizes[k];
    }
    return false;
  };
  if (!place(0)) throw ValidationError("witness_compose: input cover admits no split of U");
  std::vector<Elem> out;
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (assigned[i] == 0) out.push_back(terms[i]);
  return out;
}

} // namespace

Witness witness_compose(const Witness& first, const Witness& second) {
  const GroupSpec& s1 = first.cover.u.group()->spec();
  const GroupSpec& s2 = second.cover.u.group()->spec();
  const int d1 = davenport(s1), d2 = davenport(s2);
  const int value1 = first.cover.value.value_or(0), value2 = second.cover.value.value_or(0);
  if (value1 <= d1)
    throw HypothesisError("witness_compose: first value " + std::to_string(value1) + " does not exceed D = " + std::to_string(d1));
  if (value2 <= d2 && second.name != "dstar")
    throw HypothesisError("witness_compose: second value " + std::to_string(value2) + " does not exceed D = " +
                          std::to_string(d2) + " and it is not the dstar witness");

  std::vector<int> orders = s1.factors();
  orders.insert(orders.end(), s2.factors().begin(), s2.factors().end());
  const NormalizedWithEmbedding emb = normalize_with_embedding(orders);
  const GroupPtr group = Group::make(emb.group);
  std::vector<Elem> gens;
  for (const auto& image : emb.image_of_generator) gens.push_back(group->index_of(image));
  auto embed = [&](const Group& src, Elem x, std::size_t offset) {
    const auto coords = src.element(x).coords;
    Elem y = Group::zero();
    for (std::size_t i = 0; i < coords.size(); ++i) y = group->add(y, group->scale(gens[offset + i], coords[i]));
    return y;
  };
  auto embed_seq = [&](const Sequence& s, std::size_t offset) {
    Sequence out(group);
    for (Elem x : s.support()) out.add(embed(*s.group(), x, offset), s.multiplicity(x));
    return out;
  };
  const std::size_t off2 = s1.factors().size();
  const Elem g1 = embed(*first.cover.u.group(), first_part(first.cover).front(), 0);
  const Elem g2 = embed(*second.cover.u.group(), first_part(second.cover).front(), off2);
  const Elem glued = group->add(g1, g2);

  Sequence u = embed_seq(first.cover.u, 0).times(embed_seq(second.cover.u, off2));
  u.remove(g1);
  u.remove(g2);
  u.add(glued);
  Sequence v1 = embed_seq(first.cover.covers[0], 0).times(embed_seq(second.cover.covers[0], off2));
  v1.remove(g1);
  v1.remove(g2);
  v1.add(glued);
  std::vector<Sequence> covers{v1};
  for (std::size_t i = 1; i < first.cover.covers.size(); ++i) covers.push_back(embed_seq(first.cover.covers[i], 0));
  for (std::size_t i = 1; i < second.cover.covers.size(); ++i) covers.push_back(embed_seq(second.cover.covers[i], off2));

  Witness w;
  w.name = "compose";
  w.parameters = {{"first", first.name}, {"second", second.name}, {"G1", s1.to_string()}, {"G2", s2.to_string()}};
  w.claimed_value = value1 + value2 - 1;
  w.cover = make_cover(u, covers);
  w.check("U and V_1 are atoms", is_minimal_zero_sum(u) && is_minimal_zero_sum(v1));
  w.check("W is the product of the two input W",
          w.cover.w == embed_seq(first.cover.w, 0).times(embed_seq(second.cover.w, off2)));
  check_cover(w);
  return w;
}

// ---------------------------------------------------------------------------

bool KrullWitness::verified() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

nlohmann::json KrullWitness::to_json() const {
  nlohmann::json j;
  j["name"] = "c23_krull";
  j["model"] = model.to_json();
  j["certificate"] = cover.to_json(model);
  j["claimed_value"] = claimed_value;
  j["reduced_model"] = reduced_model.to_json();
  j["reduced_local_value"] = reduced_local_value;
  j["checks"] = checks_json(checks);
  j["verified"] = verified();
  return j;
}

namespace {

struct C23Classes {
  Elem e1, e2, e3, q1, q2, q3;
};

C23Classes c23_classes(const Group& g) {
  return {g.index_of({1, 0, 0}), g.index_of({0, 1, 0}), g.index_of({0, 0, 1}),
          g.index_of({1, 1, 1}), g.index_of({1, 0, 1}), g.index_of({0, 1, 1})};
}

KrullModel c23_model(const GroupPtr& group, int primes_in_e3) {
  const C23Classes c = c23_classes(*group);
  return KrullModel::make(group, {{c.e1, 1}, {c.e2, 1}, {c.e3, primes_in_e3}, {c.q1, 1}, {c.q2, 1}, {c.q3, 1}});
}

} // namespace

KrullWitness witness_c23_krull() {
  const GroupPtr group = Group::make(GroupSpec::from_cyclic({2, 2, 2}));
  const C23Classes c = c23_classes(*group);
  KrullWitness w{c23_model(group, 2), {}, 5, c23_model(group, 1), 0, {}};
  const KrullModel& m = w.model;
  const int p1 = m.primes_in(c.e1)[0], p2 = m.primes_in(c.e2)[0];
  const int p3 = m.primes_in(c.e3)[0], p3b = m.primes_in(c.e3)[1];
  const int q1 = m.primes_in(c.q1)[0], q2 = m.primes_in(c.q2)[0], q3 = m.primes_in(c.q3)[0];

  const PSequence u = PSequence::from_primes(m, {q1, q2, q3, p3});
  const std::vector<PSequence> v{PSequence::from_primes(m, {q1, p1, p2, p3b}), PSequence::from_primes(m, {q2, p1, p3b}),
                                 PSequence::from_primes(m, {q3, p2, p3b}), PSequence::from_primes(m, {p3, p3})};
  w.cover = make_model_cover(u, v, m);

  bool atoms = is_h_atom(u, m);
  for (const auto& x : v) atoms = atoms && is_h_atom(x, m);
  w.checks.emplace_back("u, v_1..v_4 are atoms of the model", atoms);
  w.checks.emplace_back("block image of u is (e1+e2+e3)(e1+e3)(e2+e3)e3",
                        block_image(u, m) == seq(group, {{c.q1, 1}, {c.q2, 1}, {c.q3, 1}, {c.e3, 1}}));
  w.checks.emplace_back("minimal cover re-verified", verify_model_cover(w.cover, m).ok);
  const Sequence wb = block_image(w.cover.w, m);
  w.checks.emplace_back("L(u^-1 v_1 v_2 v_3 v_4) = {4}", length_set(wb, atoms_dividing(wb)) == std::vector<int>{4});
  w.checks.emplace_back("value = 5", w.cover.value == 5);

  // without the second prime in class e3 the same u has a smaller local value
  const KrullModel& r = w.reduced_model;
  const PSequence ur = PSequence::from_primes(
      r, {r.primes_in(c.q1)[0], r.primes_in(c.q2)[0], r.primes_in(c.q3)[0], r.primes_in(c.e3)[0]});
  w.reduced_local_value = t_model_local(ur, r).value;
  w.checks.emplace_back("reduced model: t(H, u) < 5", w.reduced_local_value < 5);
  return w;
}

std::vector<std::string> witness_names() { return {"cyclic_qm", "rank", "c33", "c44", "dstar", "c23_krull", "compose"}; }

nlohmann::json make_witness(const std::string& name, const nlohmann::json& params) {
  auto basis = [&]() { return params.contains("basis") ? params.at("basis").get<Basis>() : Basis{}; };
  auto group = [&]() {
    if (!params.contains("group")) throw InvalidArgument("witness " + name + " needs a group parameter");
    return GroupSpec::parse(params.at("group").get<std::string>());
  };
  if (name == "cyclic_qm") {
    if (!params.contains("n") || !params.contains("q")) throw InvalidArgument("cyclic_qm needs n and q");
    return witness_cyclic_qm(params.at("n").get<int>(), params.at("q").get<int>(), params.value("generator", 1)).to_json();
  }
  if (name == "rank") return witness_rank(group(), basis()).to_json();
  if (name == "c33") return witness_c33(basis()).to_json();
  if (name == "c44") return witness_c44(basis()).to_json();
  if (name == "dstar") return witness_dstar(group()).to_json();
  if (name == "c23_krull") return witness_c23_krull().to_json();
  if (name == "compose") {
    // {"first": {"name":..., ...params}, "second": {...}}
    auto build = [](const nlohmann::json& p) -> Witness {
      const std::string n = p.at("name").get<std::string>();
      Basis b = p.contains("basis") ? p.at("basis").get<Basis>() : Basis{};
      if (n == "cyclic_qm") return witness_cyclic_qm(p.at("n").get<int>(), p.at("q").get<int>(), p.value("generator", 1));
      if (n == "rank") return witness_rank(GroupSpec::parse(p.at("group").get<std::string>()), b);
      if (n == "c33") return witness_c33(b);
      if (n == "c44") return witness_c44(b);
      if (n == "dstar") return witness_dstar(GroupSpec::parse(p.at("group").get<std::string>()));
      throw InvalidArgument("cannot compose witness " + n);
    };
    if (!params.contains("first") || !params.contains("second")) throw InvalidArgument("compose needs first and second");
    return witness_compose(build(params.at("first")), build(params.at("second"))).to_json();
  }
  throw InvalidArgument("unknown witness " + name);
}

} // namespace zslab
