#include "meshcloak/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <ostream>
#include <queue>
#include <set>

#include "meshcloak/error.hpp"

namespace meshcloak {

bool CloakingMesh::contains(StreetId id) const {
  return std::binary_search(streets.begin(), streets.end(), id);
}

namespace {

CloakingMesh finish(const StreetMap& map, std::set<StreetId>&& ids) {
  CloakingMesh mesh;
  mesh.streets.assign(ids.begin(), ids.end());
  for (StreetId id : mesh.streets)
    mesh.total_length += map.street_by_id(id).length;
  return mesh;
}

void expand_literal(const StreetMap& map, const Street& home,
                    double dc, std::set<StreetId>& ids) {
  std::vector<char> visited(map.terminals().size(), 0);
  std::deque<std::pair<std::int32_t, double>> q;  // (arrival terminal, L)
  auto from = map.terminal_index(home.from);
  auto to = map.terminal_index(home.to);
  q.emplace_back(to, dc);
  visited[static_cast<std::size_t>(to)] = 1;
  if (!home.oneway) {
    q.emplace_back(from, dc);
    visited[static_cast<std::size_t>(from)] = 1;
  }
  while (!q.empty()) {
    auto [v, budget] = q.front();
    q.pop_front();
    if (budget <= 0) continue;
    for (const Arc& arc : map.out_arcs(v)) {
      if (visited[static_cast<std::size_t>(arc.head)]) continue;
      visited[static_cast<std::size_t>(arc.head)] = 1;
      const Street& s = map.street_at(arc.street);
      ids.insert(s.id);
      q.emplace_back(arc.head, budget - s.length);
    }
  }
}

void expand_max_remaining(const StreetMap& map, const Street& home,
                          double dc, std::set<StreetId>& ids) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(map.terminals().size(), kInf);
  using Item = std::pair<double, std::int32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  auto seed = [&](std::int32_t t) {
    dist[static_cast<std::size_t>(t)] = 0.0;
    heap.emplace(0.0, t);
  };
  seed(map.terminal_index(home.to));
  if (!home.oneway) seed(map.terminal_index(home.from));
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d != dist[static_cast<std::size_t>(v)]) continue;
    if (d >= dc) break;
    for (const Arc& arc : map.out_arcs(v)) {
      double nd = d + map.street_at(arc.street).length;
      if (nd < dist[static_cast<std::size_t>(arc.head)]) {
        dist[static_cast<std::size_t>(arc.head)] = nd;
        heap.emplace(nd, arc.head);
      }
    }
  }
  for (const Street& s : map.streets()) {
    bool entered = dist[static_cast<std::size_t>(map.terminal_index(s.from))] < dc;
    if (!entered && !s.oneway)
      entered = dist[static_cast<std::size_t>(map.terminal_index(s.to))] < dc;
    if (entered) ids.insert(s.id);
  }
}

}  // namespace

CloakingMesh expanding_mesh(const StreetMap& map, const MapPosition& pos,
                            double dc, MeshMode mode) {
  map.validate_position(pos);
  if (dc < 0) throw ConfigError("expanding mesh: negative distance constraint");
  const Street& home = map.street_by_id(pos.street);
  std::set<StreetId> ids{home.id};
  if (mode == MeshMode::literal)
    expand_literal(map, home, dc, ids);
  else
    expand_max_remaining(map, home, dc, ids);
  return finish(map, std::move(ids));
}

CloakingMesh cloaking_mesh(
    const StreetMap& map,
    const std::vector<std::pair<MapPosition, double>>& members,
    MeshMode mode) {
  if (members.empty()) throw ConfigError("cloaking mesh: no members");
  std::set<StreetId> ids;
  for (const auto& [pos, dc] : members) {
    CloakingMesh m = expanding_mesh(map, pos, dc, mode);
    ids.insert(m.streets.begin(), m.streets.end());
  }
  return finish(map, std::move(ids));
}

void dump_mesh(std::ostream& out, const CloakingMesh& mesh) {
  out << "{\"streets\":[";
  for (std::size_t i = 0; i < mesh.streets.size(); ++i) {
    if (i) out << ',';
    out << mesh.streets[i];
  }
  auto old = out.precision(17);
  out << "],\"total_length\":" << mesh.total_length << "}\n";
  out.precision(old);
}

}  // namespace meshcloak
