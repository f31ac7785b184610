#ifndef MESHCLOAK_STREET_MAP_HPP
#define MESHCLOAK_STREET_MAP_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace meshcloak {

using TerminalId = std::int64_t;
using StreetId = std::int64_t;

// A street endpoint. Coordinates are planar meters (east, north).
struct Terminal {
  TerminalId id = 0;
  double x = 0.0;
  double y = 0.0;
};

// A straight street segment between two terminals. `oneway` means the street
// is traversable only from -> to.
struct Street {
  StreetId id = 0;
  TerminalId from = 0;
  TerminalId to = 0;
  double length = 0.0;
  bool oneway = false;
};

// A directed traversal of a street, indexed into StreetMap storage.
// Two-way streets expand to two arcs, one-way streets to one.
struct Arc {
  std::int32_t street = -1;  // index into StreetMap::streets
  std::int32_t head = -1;    // index into StreetMap::terminals
};

// A location on the map: a street plus the distance in meters from the
// street's from-terminal.
struct MapPosition {
  StreetId street = -1;
  double offset = 0.0;
};

class StreetMap {
 public:
  StreetMap() = default;

  // Builds a validated map; throws ConfigError on any invariant violation
  // (dangling endpoint, duplicate id, non-positive length, self-loop,
  // length shorter than the straight line between its endpoints).
  StreetMap(std::vector<Terminal> terminals, std::vector<Street> streets);

  const std::vector<Terminal>& terminals() const { return terminals_; }
  const std::vector<Street>& streets() const { return streets_; }

  std::size_t terminal_count() const { return terminals_.size(); }
  std::size_t street_count() const { return streets_.size(); }

  // Dense index lookups; throw ConfigError for unknown ids.
  std::int32_t terminal_index(TerminalId id) const;
  std::int32_t street_index(StreetId id) const;

  const Terminal& terminal_at(std::int32_t index) const { return terminals_[index]; }
  const Street& street_at(std::int32_t index) const { return streets_[index]; }
  const Street& street_by_id(StreetId id) const { return streets_[street_index(id)]; }

  // Outgoing arcs of a terminal, in street declaration order.
  const std::vector<Arc>& out_arcs(std::int32_t terminal_index) const {
    return out_arcs_[terminal_index];
  }

  // Tight bounding box over terminals.
  double min_x() const { return min_x_; }
  double min_y() const { return min_y_; }
  double max_x() const { return max_x_; }
  double max_y() const { return max_y_; }
  double max_street_length() const { return max_street_length_; }
  double total_street_length() const { return total_street_length_; }

  // Planar coordinates of a position by linear interpolation.
  void position_xy(const MapPosition& pos, double& x, double& y) const;

  // Throws ConfigError if pos references an unknown street or the offset is
  // outside [0, length].
  void validate_position(const MapPosition& pos) const;

 private:
  std::vector<Terminal> terminals_;
  std::vector<Street> streets_;
  std::vector<std::vector<Arc>> out_arcs_;
  std::unordered_map<TerminalId, std::int32_t> terminal_index_;
  std::unordered_map<StreetId, std::int32_t> street_index_;
  double min_x_ = 0.0, min_y_ = 0.0, max_x_ = 0.0, max_y_ = 0.0;
  double max_street_length_ = 0.0;
  double total_street_length_ = 0.0;
};

// Line-oriented text format:
//   meshcloak-map v1 <n_terminals> <n_streets>
//   N <id> <x> <y>                  (n_terminals lines)
//   E <id> <from> <to> <length> <0|1>   (n_streets lines; 1 = one-way)
StreetMap load_map(const std::string& path);
StreetMap parse_map(std::istream& in, const std::string& source_name = "<stream>");
void serialize_map(const StreetMap& map, std::ostream& out);
void save_map(const StreetMap& map, const std::string& path);

// Nearest on-street position to (x, y) among all street segments; ties broken
// by lowest street id. Throws ConfigError when no street is within max_snap.
MapPosition snap_to_street(const StreetMap& map, double x, double y, double max_snap);

enum class StreetEnd { from, to };

// Along-street distance from pos to the chosen endpoint terminal.
double offset_distance_to_terminal(const StreetMap& map, const MapPosition& pos,
                                   StreetEnd which);

// Distance from (x, y) to the segment of street `street_idx`, plus the
// along-street offset of the closest point.
double point_segment_distance(const StreetMap& map, std::int32_t street_idx, double x,
                              double y, double& offset_out);

}  // namespace meshcloak

#endif  // MESHCLOAK_STREET_MAP_HPP
