#ifndef MESHCLOAK_MESH_HPP
#define MESHCLOAK_MESH_HPP

#include <iosfwd>
#include <utility>
#include <vector>

#include "meshcloak/street_map.hpp"

namespace meshcloak {

// Whole streets only; `streets` ascending and unique, total_length the exact
// sum of their declared lengths.
struct CloakingMesh {
  std::vector<StreetId> streets;
  double total_length = 0.0;

  bool contains(StreetId id) const;
  friend bool operator==(const CloakingMesh& a, const CloakingMesh& b) {
    return a.streets == b.streets;
  }
};

// literal: FIFO expansion marking terminals visited on enqueue — a terminal
// first reached with a small residual is never revisited with a larger one.
// max_remaining: a street joins the mesh exactly when one of its entry
// terminals is reachable with positive residual budget.
enum class MeshMode { literal, max_remaining };

CloakingMesh expanding_mesh(const StreetMap& map, const MapPosition& pos,
                            double dc, MeshMode mode = MeshMode::literal);

// Union of the members' expanding meshes.
CloakingMesh cloaking_mesh(
    const StreetMap& map,
    const std::vector<std::pair<MapPosition, double>>& members,
    MeshMode mode = MeshMode::literal);

// One JSON object per call, on its own line: {"streets":[...],"total_length":x}
void dump_mesh(std::ostream& out, const CloakingMesh& mesh);

}  // namespace meshcloak

#endif  // MESHCLOAK_MESH_HPP
