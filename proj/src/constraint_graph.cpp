#include "meshcloak/constraint_graph.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "meshcloak/error.hpp"
#include "meshcloak/quadtree.hpp"

namespace meshcloak {

namespace {

void insert_sorted(std::vector<QueryId>& v, QueryId id) {
  auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it == v.end() || *it != id) v.insert(it, id);
}

bool erase_sorted(std::vector<QueryId>& v, QueryId id) {
  auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it == v.end() || *it != id) return false;
  v.erase(it);
  return true;
}

}  // namespace

void ConstraintGraph::add_node(QueryId id) {
  if (has_node(id))
    throw ConfigError("constraint graph: node " + std::to_string(id) +
                      " already present");
  adjacency_.emplace(id, std::vector<QueryId>{});
}

void ConstraintGraph::add_node(QueryId id,
                               const std::vector<QueryId>& neighbors) {
  add_node(id);
  for (QueryId n : neighbors) add_edge(id, n);
}

void ConstraintGraph::add_edge(QueryId a, QueryId b) {
  if (a == b) throw ConfigError("constraint graph: self edge");
  auto ia = adjacency_.find(a);
  auto ib = adjacency_.find(b);
  if (ia == adjacency_.end() || ib == adjacency_.end())
    throw ConfigError("constraint graph: edge endpoint missing");
  if (has_edge(a, b)) return;
  insert_sorted(ia->second, b);
  insert_sorted(ib->second, a);
  ++edge_count_;
}

void ConstraintGraph::remove_node(QueryId id) {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end())
    throw ConfigError("constraint graph: node " + std::to_string(id) +
                      " not present");
  for (QueryId n : it->second) {
    erase_sorted(adjacency_.at(n), id);
    --edge_count_;
  }
  adjacency_.erase(it);
}

bool ConstraintGraph::has_edge(QueryId a, QueryId b) const {
  auto it = adjacency_.find(a);
  if (it == adjacency_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), b);
}

const std::vector<QueryId>& ConstraintGraph::neighbors(QueryId id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end())
    throw ConfigError("constraint graph: node " + std::to_string(id) +
                      " not present");
  return it->second;
}

std::vector<QueryId> ConstraintGraph::sorted_nodes() const {
  std::vector<QueryId> nodes;
  nodes.reserve(adjacency_.size());
  for (const auto& [id, _] : adjacency_) nodes.push_back(id);
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

void ConstraintGraph::dump_edges(std::ostream& out) const {
  for (QueryId a : sorted_nodes())
    for (QueryId b : neighbors(a))
      if (a < b) out << a << ' ' << b << '\n';
}

bool covers(const Query& from, const Query& to, const BoundedDistanceMatrix& m,
            const StreetMap& map, EdgeRule rule) {
  auto d_fwd = point_distance(from.pos, to.pos, m, map);
  if (!d_fwd) return false;
  double bound = rule == EdgeRule::strict ? std::min(from.dc, to.dc) : from.dc;
  return *d_fwd <= bound;
}

ConstraintGraph build_constraint_graph(const std::vector<Query>& queries,
                                       const BoundedDistanceMatrix& m,
                                       const StreetMap& map, EdgeRule rule) {
  ConstraintGraph g;
  for (const Query& q : queries) {
    if (q.dc > m.dc_max())
      throw ConfigError("query " + std::to_string(q.id) + ": dc " +
                        std::to_string(q.dc) + " exceeds matrix bound " +
                        std::to_string(m.dc_max()));
    g.add_node(q.id);
  }
  if (queries.size() < 2) return g;

  std::vector<QuadPoint> points;
  points.reserve(queries.size());
  std::vector<double> xs(queries.size()), ys(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    map.position_xy(queries[i].pos, xs[i], ys[i]);
    points.push_back({xs[i], ys[i], static_cast<std::int64_t>(i)});
  }
  QuadTree tree(points);

  // Directed coverage marks, stored per source as sorted target indices.
  std::vector<std::vector<std::int64_t>> marks(queries.size());
  std::vector<std::int64_t> candidates;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Query& q = queries[i];
    candidates.clear();
    tree.range_search(xs[i], ys[i], q.dc, candidates);
    for (std::int64_t j : candidates) {
      if (j == static_cast<std::int64_t>(i)) continue;
      if (covers(q, queries[static_cast<std::size_t>(j)], m, map, rule))
        marks[i].push_back(j);
    }
    std::sort(marks[i].begin(), marks[i].end());
  }
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (std::int64_t j : marks[i]) {
      auto sj = static_cast<std::size_t>(j);
      if (sj < i) continue;  // handled from the lower-index side
      if (std::binary_search(marks[sj].begin(), marks[sj].end(),
                             static_cast<std::int64_t>(i)))
        g.add_edge(queries[i].id, queries[sj].id);
    }
  }
  return g;
}

}  // namespace meshcloak
