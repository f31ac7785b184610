#ifndef MESHCLOAK_DISTANCE_HPP
#define MESHCLOAK_DISTANCE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "meshcloak/street_map.hpp"

namespace meshcloak {

// Sparse directed terminal-pair shortest distances, keeping only pairs whose
// network distance is <= dc_max. The diagonal is implicit zero.
class BoundedDistanceMatrix {
 public:
  struct Entry {
    std::int32_t target = -1;  // terminal index
    double dist = 0.0;
  };

  BoundedDistanceMatrix(double dc_max, std::size_t n_terminals)
      : dc_max_(dc_max), rows_(n_terminals) {}

  double dc_max() const { return dc_max_; }
  std::size_t entry_count() const { return entry_count_; }
  std::size_t terminal_count() const { return rows_.size(); }

  // Directed distance between terminal indices. 0 for u == v; nullopt when
  // the pair is not stored (distance exceeds dc_max or unreachable).
  std::optional<double> terminal_distance(std::int32_t u, std::int32_t v) const;

  const std::vector<Entry>& row(std::int32_t source) const { return rows_[source]; }

  // Row must be sorted by target index; used by the builder and cache loader.
  void set_row(std::int32_t source, std::vector<Entry> entries);

 private:
  double dc_max_ = 0.0;
  std::vector<std::vector<Entry>> rows_;
  std::size_t entry_count_ = 0;
};

// Per-source bounded Dijkstra over the sub-map induced by a quadtree square
// range search of half-width dc_max. Sources run independently; `threads`
// caps the worker count (results are identical for any value).
BoundedDistanceMatrix map_distance_matrix(const StreetMap& map, double dc_max,
                                          unsigned threads = 1);

// Directed shortest network distance between two on-street positions via the
// landmark decomposition over street endpoint terminals (same-street pairs
// use along-street arithmetic, still taking the minimum with any detour
// through the terminals). Exact whenever the true distance is <= m.dc_max;
// otherwise an upper bound, or nullopt when no decomposition is certified by
// the matrix.
std::optional<double> point_distance(const MapPosition& a, const MapPosition& b,
                                     const BoundedDistanceMatrix& m,
                                     const StreetMap& map);

// Cache file: `meshcloak-matrix v1 <dc_max> <n_entries>` then one
// `<u> <v> <d>` record per line (terminal ids).
void save_matrix(const BoundedDistanceMatrix& m, const StreetMap& map,
                 const std::string& path);
void serialize_matrix(const BoundedDistanceMatrix& m, const StreetMap& map,
                      std::ostream& out);

// Throws ConfigError when the cached dc_max differs from expected_dc_max or
// the file references unknown terminals.
BoundedDistanceMatrix load_matrix(const StreetMap& map, const std::string& path,
                                  double expected_dc_max);

}  // namespace meshcloak

#endif  // MESHCLOAK_DISTANCE_HPP
