#include "zslab/symmetry.hpp"

#include <numeric>
#include <random>

namespace zslab {

std::vector<ElementMap> random_automorphisms(const Group& group, int count, std::uint64_t seed) {
  const int n = group.size();
  ElementMap identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<ElementMap> out{identity};
  const auto& factors = group.spec().factors();
  const int rank = static_cast<int>(factors.size());
  if (rank == 0) return out;

  std::vector<std::vector<Elem>> choices(rank);
  for (int i = 0; i < rank; ++i)
    for (int g = 0; g < n; ++g)
      if (factors[i] % group.order(g) == 0) choices[i].push_back(static_cast<Elem>(g));

  std::mt19937_64 rng(seed);
  int attempts = 0;
  while (static_cast<int>(out.size()) < count + 1 && attempts++ < 200 * (count + 1)) {
    std::vector<Elem> images(rank);
    for (int i = 0; i < rank; ++i) images[i] = choices[i][rng() % choices[i].size()];
    ElementMap map(n);
    std::vector<bool> hit(n, false);
    bool bijective = true;
    for (int x = 0; x < n && bijective; ++x) {
      const auto coords = group.element(x).coords;
      Elem y = 0;
      for (int i = 0; i < rank; ++i) y = group.add(y, group.scale(images[i], coords[i]));
      if (hit[y]) bijective = false;
      hit[y] = true;
      map[x] = y;
    }
    if (bijective) out.push_back(std::move(map));
  }
  return out;
}

Sequence apply_map(const ElementMap& map, const Sequence& s) {
  Sequence out(s.group());
  for (Elem g : s.support()) out.add(map[g], s.multiplicity(g));
  return out;
}

AtomOrbits atom_orbits(const AtomTable& table, const std::vector<ElementMap>& maps) {
  const int n = table.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  if (table.full_support()) {
    for (const auto& map : maps)
      for (int i = 0; i < n; ++i) {
        const auto j = table.find(apply_map(map, table.atom(i)));
        if (!j) continue;
        int a = find(i), b = find(*j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  }
  AtomOrbits out;
  out.orbit_of.assign(n, -1);
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(out.representatives.size());
      out.representatives.push_back(i);
      out.orbit_size.push_back(0);
    }
    out.orbit_of[i] = slot[root];
    ++out.orbit_size[slot[root]];
  }
  return out;
}

} // namespace zslab
