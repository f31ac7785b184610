#include "meshcloak/synthetic_map.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "meshcloak/error.hpp"
#include "meshcloak/quadtree.hpp"
#include "meshcloak/rng.hpp"

namespace meshcloak {

namespace {

double stretched(double base, Rng& rng) {
  return std::max(base * (1.0 + 0.3 * rng.next_double()), 1e-3);
}

std::uint64_t pair_key(std::int64_t a, std::int64_t b) {
  auto lo = static_cast<std::uint64_t>(std::min(a, b));
  auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

struct CandidateEdge {
  double d;
  std::int64_t a;
  std::int64_t b;
};

}  // namespace

StreetMap synthetic_map(std::size_t n_terminals, std::size_t n_streets,
                        double width, double height, double oneway_fraction,
                        std::uint64_t seed) {
  if (n_terminals < 2) throw ConfigError("synthetic map: need >= 2 terminals");
  if (n_streets + 1 < n_terminals)
    throw ConfigError("synthetic map: need >= n_terminals - 1 streets");
  if (!(width > 0) || !(height > 0))
    throw ConfigError("synthetic map: non-positive extent");
  if (!(oneway_fraction >= 0 && oneway_fraction <= 1))
    throw ConfigError("synthetic map: oneway fraction outside [0,1]");

  Rng rng = Rng(seed).stream("synthetic-map");

  std::vector<Terminal> terminals;
  terminals.reserve(n_terminals);
  for (std::size_t i = 0; i < n_terminals; ++i)
    terminals.push_back({static_cast<TerminalId>(i),
                         rng.uniform_double(0, width),
                         rng.uniform_double(0, height)});

  auto euclid = [&](std::int64_t a, std::int64_t b) {
    const Terminal& ta = terminals[static_cast<std::size_t>(a)];
    const Terminal& tb = terminals[static_cast<std::size_t>(b)];
    return std::hypot(ta.x - tb.x, ta.y - tb.y);
  };

  std::vector<QuadPoint> points;
  points.reserve(n_terminals);
  for (const Terminal& t : terminals) points.push_back({t.x, t.y, t.id});
  QuadTree tree(points);

  // Candidate edges: each terminal to its ~6 nearest neighbours, so street
  // lengths track the terminal spacing as in a real road network.
  const double base_radius =
      1.6 * std::sqrt(width * height / static_cast<double>(n_terminals));
  std::vector<CandidateEdge> candidates;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::int64_t> hits;
  for (std::size_t i = 0; i < n_terminals; ++i) {
    const Terminal& ti = terminals[i];
    double radius = base_radius;
    for (int grow = 0; grow < 24; ++grow, radius *= 2) {
      hits.clear();
      tree.range_search(ti.x, ti.y, radius, hits);
      if (hits.size() >= 7 || radius > width + height) break;
    }
    std::vector<std::pair<double, std::int64_t>> near;
    near.reserve(hits.size());
    for (std::int64_t h : hits)
      if (h != static_cast<std::int64_t>(i))
        near.push_back({euclid(static_cast<std::int64_t>(i), h), h});
    std::sort(near.begin(), near.end());
    if (near.size() > 6) near.resize(6);
    for (const auto& [d, h] : near)
      if (seen.insert(pair_key(static_cast<std::int64_t>(i), h)).second)
        candidates.push_back({d, static_cast<std::int64_t>(i), h});
  }
  std::sort(candidates.begin(), candidates.end(), [](const CandidateEdge& l,
                                                     const CandidateEdge& r) {
    return std::tie(l.d, l.a, l.b) < std::tie(r.d, r.a, r.b);
  });

  std::vector<Street> streets;
  streets.reserve(n_streets);
  std::unordered_set<std::uint64_t> used;
  StreetId next_id = 0;

  // Spanning structure: Kruskal over the short candidate edges; two-way so
  // the network stays strongly connected.
  UnionFind uf(n_terminals);
  std::size_t components = n_terminals;
  std::vector<CandidateEdge> spare;
  for (const CandidateEdge& e : candidates) {
    if (components > 1 &&
        uf.unite(static_cast<std::size_t>(e.a), static_cast<std::size_t>(e.b))) {
      --components;
      used.insert(pair_key(e.a, e.b));
      streets.push_back({next_id++, static_cast<TerminalId>(e.a),
                         static_cast<TerminalId>(e.b), stretched(e.d, rng),
                         false});
    } else {
      spare.push_back(e);
    }
  }
  // Rare: the k-nearest-neighbour graph left isolated clusters; stitch each
  // remaining component to its nearest outside terminal.
  while (components > 1) {
    std::size_t root = uf.find(0);
    double best_d = 0;
    std::int64_t best_a = -1, best_b = -1;
    for (std::size_t i = 0; i < n_terminals; ++i) {
      if (uf.find(i) != root) continue;
      for (std::size_t j = 0; j < n_terminals; ++j) {
        if (uf.find(j) == root) continue;
        double d = euclid(static_cast<std::int64_t>(i),
                          static_cast<std::int64_t>(j));
        if (best_a < 0 || d < best_d) {
          best_d = d;
          best_a = static_cast<std::int64_t>(i);
          best_b = static_cast<std::int64_t>(j);
        }
      }
    }
    uf.unite(static_cast<std::size_t>(best_a), static_cast<std::size_t>(best_b));
    --components;
    used.insert(pair_key(best_a, best_b));
    streets.push_back({next_id++, static_cast<TerminalId>(best_a),
                       static_cast<TerminalId>(best_b), stretched(best_d, rng),
                       false});
  }

  // Extra streets drawn randomly from the unused short candidates.
  for (std::size_t i = spare.size(); i > 1; --i)
    std::swap(spare[i - 1], spare[rng.uniform_u64(i)]);
  for (const CandidateEdge& e : spare) {
    if (streets.size() >= n_streets) break;
    if (!used.insert(pair_key(e.a, e.b)).second) continue;
    bool oneway = rng.next_double() < oneway_fraction;
    streets.push_back({next_id++, static_cast<TerminalId>(e.a),
                       static_cast<TerminalId>(e.b), stretched(e.d, rng),
                       oneway});
  }

  // Fill any remainder from random anchors with an expanding search radius.
  std::size_t attempts = 0;
  const std::size_t max_attempts = 64 * n_streets + 1024;
  while (streets.size() < n_streets) {
    if (++attempts > max_attempts)
      throw ConfigError("synthetic map: cannot place requested street count");
    auto a = static_cast<std::int64_t>(rng.uniform_u64(n_terminals));
    const Terminal& ta = terminals[static_cast<std::size_t>(a)];
    double radius = base_radius;
    std::int64_t b = -1;
    for (int grow = 0; grow < 24 && b < 0; ++grow, radius *= 2) {
      hits.clear();
      tree.range_search(ta.x, ta.y, radius, hits);
      std::sort(hits.begin(), hits.end());
      while (!hits.empty()) {
        std::size_t pick = rng.uniform_u64(hits.size());
        std::int64_t c = hits[pick];
        hits.erase(hits.begin() + static_cast<std::ptrdiff_t>(pick));
        if (c == a || used.count(pair_key(a, c))) continue;
        b = c;
        break;
      }
    }
    if (b < 0) continue;  // saturated neighbourhood; try another anchor
    used.insert(pair_key(a, b));
    bool oneway = rng.next_double() < oneway_fraction;
    streets.push_back({next_id++, static_cast<TerminalId>(a),
                       static_cast<TerminalId>(b),
                       stretched(euclid(a, b), rng), oneway});
  }

  return StreetMap(std::move(terminals), std::move(streets));
}

StreetMap grid_map(std::size_t nx, std::size_t ny, double spacing) {
  if (nx < 2 || ny < 2) throw ConfigError("grid map: need >= 2x2 terminals");
  if (!(spacing > 0)) throw ConfigError("grid map: non-positive spacing");

  std::vector<Terminal> terminals;
  terminals.reserve(nx * ny);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x)
      terminals.push_back({static_cast<TerminalId>(y * nx + x),
                           static_cast<double>(x) * spacing,
                           static_cast<double>(y) * spacing});

  std::vector<Street> streets;
  streets.reserve((nx - 1) * ny + nx * (ny - 1));
  StreetId id = 0;
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x + 1 < nx; ++x) {
      auto t = static_cast<TerminalId>(y * nx + x);
      streets.push_back({id++, t, t + 1, spacing, false});
    }
  for (std::size_t y = 0; y + 1 < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x) {
      auto t = static_cast<TerminalId>(y * nx + x);
      streets.push_back({id++, t, t + static_cast<TerminalId>(nx), spacing,
                         false});
    }

  return StreetMap(std::move(terminals), std::move(streets));
}

}  // namespace meshcloak
