#ifndef MESHCLOAK_SNAP_INDEX_HPP
#define MESHCLOAK_SNAP_INDEX_HPP

#include <memory>
#include <vector>

#include "meshcloak/quadtree.hpp"
#include "meshcloak/street_map.hpp"

namespace meshcloak {

// Quadtree-accelerated snapping with results identical to snap_to_street
// (same nearest street, same tie-break). A street within max_snap of a point
// always has an endpoint within max_snap + length/2, so searching terminals
// in that square and checking their incident streets is exhaustive.
// Immutable after construction; snap() is safe to call concurrently.
class SnapIndex {
 public:
  explicit SnapIndex(const StreetMap& map);

  MapPosition snap(double x, double y, double max_snap) const;

 private:
  const StreetMap* map_;
  std::unique_ptr<QuadTree> terminals_;
  std::vector<std::vector<std::int32_t>> incident_;  // street indices per terminal
};

}  // namespace meshcloak

#endif  // MESHCLOAK_SNAP_INDEX_HPP
