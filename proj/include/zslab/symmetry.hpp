#pragma once

#include <cstdint>
#include <vector>

#include "zslab/atoms.hpp"

namespace zslab {

// An automorphism as the image of every element index.
using ElementMap = std::vector<Elem>;

// Automorphisms drawn by sending each generator to a random element of
// matching order and keeping the map when it is bijective. Deterministic for
// a given seed. The result always starts with the identity.
std::vector<ElementMap> random_automorphisms(const Group& group, int count, std::uint64_t seed = 0x5eed);

Sequence apply_map(const ElementMap& map, const Sequence& s);

// Orbits of a table's atoms under the group generated by the given maps.
// Only meaningful for full-support tables; otherwise each atom is its own
// orbit. A generating set that misses part of Aut(G) just splits orbits.
struct AtomOrbits {
  std::vector<int> representatives;  // least index of each orbit, ascending
  std::vector<int> orbit_of;         // atom index -> position in representatives
  std::vector<int> orbit_size;
};
AtomOrbits atom_orbits(const AtomTable& table, const std::vector<ElementMap>& maps);

} // namespace zslab
