#include "meshcloak/distance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <thread>

#include "meshcloak/error.hpp"
#include "meshcloak/quadtree.hpp"

namespace meshcloak {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::optional<double> BoundedDistanceMatrix::terminal_distance(std::int32_t u,
                                                               std::int32_t v) const {
  if (u == v) {
    return 0.0;
  }
  const std::vector<Entry>& row = rows_[u];
  auto it = std::lower_bound(row.begin(), row.end(), v,
                             [](const Entry& e, std::int32_t t) { return e.target < t; });
  if (it != row.end() && it->target == v) {
    return it->dist;
  }
  return std::nullopt;
}

void BoundedDistanceMatrix::set_row(std::int32_t source, std::vector<Entry> entries) {
  entry_count_ -= rows_[source].size();
  rows_[source] = std::move(entries);
  entry_count_ += rows_[source].size();
}

namespace {

// Scratch for one worker. Stamping avoids O(|V|) clears between sources.
struct DijkstraScratch {
  std::vector<double> dist;
  std::vector<std::uint32_t> stamp;
  std::vector<std::uint32_t> in_submap;
  std::uint32_t current = 0;

  explicit DijkstraScratch(std::size_t n)
      : dist(n, kInf), stamp(n, 0), in_submap(n, 0) {}
};

std::vector<BoundedDistanceMatrix::Entry> bounded_single_source(
    const StreetMap& map, const QuadTree& qt, std::int32_t source, double dc_max,
    DijkstraScratch& scratch) {
  const Terminal& origin = map.terminal_at(source);
  scratch.current++;
  const std::uint32_t stamp = scratch.current;

  std::vector<std::int64_t> nearby = qt.range_search(origin.x, origin.y, dc_max);
  for (std::int64_t v : nearby) {
    scratch.in_submap[static_cast<std::size_t>(v)] = stamp;
  }
  scratch.in_submap[source] = stamp;

  using Item = std::pair<double, std::int32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  scratch.dist[source] = 0.0;
  scratch.stamp[source] = stamp;
  heap.push({0.0, source});

  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dc_max) {
      break;  // every remaining label exceeds the bound
    }
    if (d > scratch.dist[u]) {
      continue;  // stale heap item
    }
    for (const Arc& arc : map.out_arcs(u)) {
      if (scratch.in_submap[arc.head] != stamp) {
        continue;
      }
      const double nd = d + map.street_at(arc.street).length;
      if (scratch.stamp[arc.head] != stamp || nd < scratch.dist[arc.head]) {
        scratch.stamp[arc.head] = stamp;
        scratch.dist[arc.head] = nd;
        heap.push({nd, arc.head});
      }
    }
  }

  std::vector<BoundedDistanceMatrix::Entry> entries;
  for (std::int64_t raw : nearby) {
    const auto v = static_cast<std::int32_t>(raw);
    if (v == source) {
      continue;
    }
    if (scratch.stamp[v] == stamp && scratch.dist[v] <= dc_max) {
      entries.push_back({v, scratch.dist[v]});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.target < b.target; });
  return entries;
}

}  // namespace

BoundedDistanceMatrix map_distance_matrix(const StreetMap& map, double dc_max,
                                          unsigned threads) {
  if (!(dc_max > 0.0)) {
    throw ConfigError("map_distance_matrix: dc_max must be positive");
  }
  const auto n = static_cast<std::int32_t>(map.terminal_count());
  BoundedDistanceMatrix matrix(dc_max, map.terminal_count());
  if (n == 0) {
    return matrix;
  }

  std::vector<QuadPoint> points;
  points.reserve(map.terminal_count());
  for (std::int32_t i = 0; i < n; ++i) {
    const Terminal& t = map.terminal_at(i);
    points.push_back({t.x, t.y, i});
  }
  const QuadTree qt(points);

  const unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    DijkstraScratch scratch(map.terminal_count());
    for (std::int32_t u = 0; u < n; ++u) {
      matrix.set_row(u, bounded_single_source(map, qt, u, dc_max, scratch));
    }
    return matrix;
  }

  std::atomic<std::int32_t> next{0};
  std::vector<std::vector<BoundedDistanceMatrix::Entry>> rows(map.terminal_count());
  auto work = [&] {
    DijkstraScratch scratch(map.terminal_count());
    for (;;) {
      const std::int32_t u = next.fetch_add(1);
      if (u >= n) {
        return;
      }
      rows[u] = bounded_single_source(map, qt, u, dc_max, scratch);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < workers; ++i) {
    pool.emplace_back(work);
  }
  for (auto& t : pool) {
    t.join();
  }
  for (std::int32_t u = 0; u < n; ++u) {
    matrix.set_row(u, std::move(rows[u]));
  }
  return matrix;
}

namespace {

struct EndpointLeg {
  std::int32_t terminal;  // terminal index
  double along;           // on-street meters to reach/leave it
};

// Ways to leave position `a` through an endpoint of its street. A position
// at offset 0 coincides with the from-terminal, so it may depart through it
// even on a one-way street (and symmetrically at offset = length).
void exits_of(const StreetMap& map, const Street& s, double offset,
              EndpointLeg out[2], int& count) {
  const std::int32_t from = map.terminal_index(s.from);
  const std::int32_t to = map.terminal_index(s.to);
  count = 0;
  if (!s.oneway || offset == 0.0) {
    out[count++] = {from, offset};
  }
  out[count++] = {to, s.length - offset};
}

// Ways to reach position `b` from an endpoint of its street.
void enters_of(const StreetMap& map, const Street& s, double offset,
               EndpointLeg out[2], int& count) {
  const std::int32_t from = map.terminal_index(s.from);
  const std::int32_t to = map.terminal_index(s.to);
  count = 0;
  out[count++] = {from, offset};
  if (!s.oneway || offset == s.length) {
    out[count++] = {to, s.length - offset};
  }
}

}  // namespace

std::optional<double> point_distance(const MapPosition& a, const MapPosition& b,
                                     const BoundedDistanceMatrix& m,
                                     const StreetMap& map) {
  const Street& sa = map.street_by_id(a.street);

  if (a.street == b.street) {
    if (sa.oneway) {
      if (b.offset >= a.offset) {
        return b.offset - a.offset;
      }
      // Backwards on a one-way street: out at the head, around the network,
      // back in at the tail.
      const std::int32_t from = map.terminal_index(sa.from);
      const std::int32_t to = map.terminal_index(sa.to);
      if (auto mid = m.terminal_distance(to, from)) {
        return (sa.length - a.offset) + *mid + b.offset;
      }
      return std::nullopt;
    }
    double best = std::abs(a.offset - b.offset);
    EndpointLeg exits[2], enters[2];
    int n_exits = 0, n_enters = 0;
    exits_of(map, sa, a.offset, exits, n_exits);
    enters_of(map, sa, b.offset, enters, n_enters);
    for (int i = 0; i < n_exits; ++i) {
      for (int j = 0; j < n_enters; ++j) {
        if (auto mid = m.terminal_distance(exits[i].terminal, enters[j].terminal)) {
          best = std::min(best, exits[i].along + *mid + enters[j].along);
        }
      }
    }
    return best;
  }

  const Street& sb = map.street_by_id(b.street);
  EndpointLeg exits[2], enters[2];
  int n_exits = 0, n_enters = 0;
  exits_of(map, sa, a.offset, exits, n_exits);
  enters_of(map, sb, b.offset, enters, n_enters);

  double best = kInf;
  for (int i = 0; i < n_exits; ++i) {
    for (int j = 0; j < n_enters; ++j) {
      if (auto mid = m.terminal_distance(exits[i].terminal, enters[j].terminal)) {
        best = std::min(best, exits[i].along + *mid + enters[j].along);
      }
    }
  }
  if (best == kInf) {
    return std::nullopt;
  }
  return best;
}

void serialize_matrix(const BoundedDistanceMatrix& m, const StreetMap& map,
                      std::ostream& out) {
  out.precision(17);
  out << "meshcloak-matrix v1 " << m.dc_max() << ' ' << m.entry_count() << '\n';
  for (std::int32_t u = 0; u < static_cast<std::int32_t>(m.terminal_count()); ++u) {
    const TerminalId uid = map.terminal_at(u).id;
    for (const auto& e : m.row(u)) {
      out << uid << ' ' << map.terminal_at(e.target).id << ' ' << e.dist << '\n';
    }
  }
}

void save_matrix(const BoundedDistanceMatrix& m, const StreetMap& map,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write matrix cache: " + path);
  }
  serialize_matrix(m, map, out);
  if (!out) {
    throw EngineError("write failed: " + path);
  }
}

BoundedDistanceMatrix load_matrix(const StreetMap& map, const std::string& path,
                                  double expected_dc_max) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open matrix cache: " + path);
  }
  std::string magic, version;
  double dc_max = 0.0;
  std::size_t n_entries = 0;
  if (!(in >> magic >> version >> dc_max >> n_entries) || magic != "meshcloak-matrix" ||
      version != "v1") {
    throw ConfigError(path + ": bad matrix cache header");
  }
  if (dc_max != expected_dc_max) {
    std::ostringstream msg;
    msg.precision(17);
    msg << path << ": cache dc_max " << dc_max << " does not match requested "
        << expected_dc_max;
    throw ConfigError(msg.str());
  }

  std::vector<std::vector<BoundedDistanceMatrix::Entry>> rows(map.terminal_count());
  for (std::size_t i = 0; i < n_entries; ++i) {
    TerminalId uid = 0, vid = 0;
    double d = 0.0;
    if (!(in >> uid >> vid >> d)) {
      throw ConfigError(path + ": truncated matrix cache");
    }
    const std::int32_t u = map.terminal_index(uid);
    const std::int32_t v = map.terminal_index(vid);
    if (u == v || !(d > 0.0) || d > dc_max) {
      throw ConfigError(path + ": invalid matrix entry " + std::to_string(uid) + " " +
                        std::to_string(vid));
    }
    rows[u].push_back({v, d});
  }

  BoundedDistanceMatrix m(dc_max, map.terminal_count());
  for (std::int32_t u = 0; u < static_cast<std::int32_t>(rows.size()); ++u) {
    std::sort(rows[u].begin(), rows[u].end(),
              [](const auto& a, const auto& b) { return a.target < b.target; });
    for (std::size_t j = 1; j < rows[u].size(); ++j) {
      if (rows[u][j].target == rows[u][j - 1].target) {
        throw ConfigError(path + ": duplicate matrix entry");
      }
    }
    m.set_row(u, std::move(rows[u]));
  }
  return m;
}

}  // namespace meshcloak
