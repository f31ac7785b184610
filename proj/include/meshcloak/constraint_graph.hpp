#ifndef MESHCLOAK_CONSTRAINT_GRAPH_HPP
#define MESHCLOAK_CONSTRAINT_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "meshcloak/distance.hpp"
#include "meshcloak/query.hpp"
#include "meshcloak/street_map.hpp"

namespace meshcloak {

// When queries q and q' form an undirected edge. The two readings of the
// mutual-coverage requirement differ on asymmetric maps:
//   literal: d(q,q') <= dc_q AND d(q',q) <= dc_q'   (per-direction budgets)
//   strict:  max(d(q,q'), d(q',q)) <= min(dc_q, dc_q')
enum class EdgeRule { literal, strict };

// Undirected, unweighted graph over waiting-query ids. Symmetric adjacency,
// no self-edges; neighbor lists are kept sorted.
class ConstraintGraph {
 public:
  void add_node(QueryId id);
  // All neighbors must already be nodes; adds the node plus its edges.
  void add_node(QueryId id, const std::vector<QueryId>& neighbors);
  void add_edge(QueryId a, QueryId b);
  void remove_node(QueryId id);

  bool has_node(QueryId id) const { return adjacency_.count(id) != 0; }
  bool has_edge(QueryId a, QueryId b) const;
  const std::vector<QueryId>& neighbors(QueryId id) const;

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::vector<QueryId> sorted_nodes() const;

  // One `<qid> <qid>` line per edge, lower id first, sorted.
  void dump_edges(std::ostream& out) const;

 private:
  std::unordered_map<QueryId, std::vector<QueryId>> adjacency_;
  std::size_t edge_count_ = 0;
};

// Quadtree-pruned construction: for each query, candidates come from a
// closed-square range search of half-width dc_q, directed coverage is checked
// with point_distance, and an edge survives only when both directions pass
// the rule. The square prune is lossless because network distance bounds
// Euclidean displacement from below.
//
// Throws ConfigError if any query has dc > m.dc_max (the matrix could not
// certify its coverage).
ConstraintGraph build_constraint_graph(const std::vector<Query>& queries,
                                       const BoundedDistanceMatrix& m,
                                       const StreetMap& map,
                                       EdgeRule rule = EdgeRule::literal);

// Directed coverage test shared by the batch builder and the sequential
// engine's incremental updates.
bool covers(const Query& from, const Query& to, const BoundedDistanceMatrix& m,
            const StreetMap& map, EdgeRule rule);

}  // namespace meshcloak

#endif  // MESHCLOAK_CONSTRAINT_GRAPH_HPP
