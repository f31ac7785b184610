#ifndef MESHCLOAK_SYNTHETIC_MAP_HPP
#define MESHCLOAK_SYNTHETIC_MAP_HPP

#include <cstddef>
#include <cstdint>

#include "meshcloak/street_map.hpp"

namespace meshcloak {

// Random road network with exact terminal/street counts: terminals uniform
// in the box, a proximity-biased spanning tree of two-way streets for
// connectivity, then extra near-pair streets of which roughly
// oneway_fraction are one-way. Lengths are the straight line stretched by
// up to 30%.
StreetMap synthetic_map(std::size_t n_terminals, std::size_t n_streets,
                        double width, double height, double oneway_fraction,
                        std::uint64_t seed);

// nx-by-ny lattice of two-way streets with the given edge length; terminal
// ids are row-major.
StreetMap grid_map(std::size_t nx, std::size_t ny, double spacing);

}  // namespace meshcloak

#endif  // MESHCLOAK_SYNTHETIC_MAP_HPP
