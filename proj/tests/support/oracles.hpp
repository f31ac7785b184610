#ifndef TESTS_SUPPORT_ORACLES_HPP
#define TESTS_SUPPORT_ORACLES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "meshcloak/constraint_graph.hpp"
#include "meshcloak/distance.hpp"
#include "meshcloak/query.hpp"
#include "meshcloak/street_map.hpp"

namespace testsupport {

// Unbounded single-source Dijkstra over the whole map; infinity where
// unreachable. Independent of the production bounded/pruned variant.
std::vector<double> full_dijkstra(const meshcloak::StreetMap& map,
                                  std::int32_t source);

// Exact point-to-point network distance via a per-call graph rebuild that
// splits the hosting streets at the positions (virtual nodes), then runs
// plain Dijkstra. The reference for point_distance.
std::optional<double> virtual_node_distance(const meshcloak::StreetMap& map,
                                            const meshcloak::MapPosition& a,
                                            const meshcloak::MapPosition& b);

// O(n^2) constraint graph with the directed-coverage rule written out
// long-hand; no spatial pruning.
meshcloak::ConstraintGraph brute_force_cg(
    const std::vector<meshcloak::Query>& queries,
    const meshcloak::BoundedDistanceMatrix& m,
    const meshcloak::StreetMap& map, meshcloak::EdgeRule rule);

// All maximal cliques of an n-vertex graph (n <= 25) by subset enumeration
// over adjacency bitmasks; cliques ascending, list lexicographic.
std::vector<std::vector<int>> brute_force_cliques(
    int n, const std::vector<std::uint32_t>& adj);

}  // namespace testsupport

#endif  // TESTS_SUPPORT_ORACLES_HPP
