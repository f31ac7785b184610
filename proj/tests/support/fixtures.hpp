#ifndef TESTS_SUPPORT_FIXTURES_HPP
#define TESTS_SUPPORT_FIXTURES_HPP

#include <cstdint>

#include "meshcloak/query.hpp"
#include "meshcloak/rng.hpp"
#include "meshcloak/street_map.hpp"

namespace testsupport {

// 100 m square: terminals 0..3 at (0,0),(100,0),(100,100),(0,100), four
// two-way streets 0:(0-1) 1:(1-2) 2:(2-3) 3:(3-0).
meshcloak::StreetMap unit_square_map();

// Same square with street 0 made one-way (0 -> 1).
meshcloak::StreetMap unit_square_oneway_map();

// One-way triangle 0->1->2->0 with lengths 100, 120, 120 (ring 340 m).
meshcloak::StreetMap oneway_ring_map();

// Connected random map for oracle sweeps; terminal count in [min_t, max_t],
// mixed one-way extra streets.
meshcloak::StreetMap random_map(meshcloak::Rng& rng, std::size_t min_t,
                                std::size_t max_t);

// Uniform random on-street position.
meshcloak::MapPosition random_position(const meshcloak::StreetMap& map,
                                       meshcloak::Rng& rng);

meshcloak::Query make_query(meshcloak::QueryId id, meshcloak::MapPosition pos,
                            double dc, int k = 2, std::int64_t t = 0,
                            std::int64_t dt = 1);

}  // namespace testsupport

#endif  // TESTS_SUPPORT_FIXTURES_HPP
