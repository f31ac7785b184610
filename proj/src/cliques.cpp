#include "meshcloak/cliques.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "meshcloak/error.hpp"

namespace meshcloak {

bool CliqueSet::contains_node(QueryId v) const {
  auto it = index_.find(v);
  return it != index_.end() && !it->second.empty();
}

std::vector<std::size_t> CliqueSet::slots_containing(QueryId v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return {};
  return it->second;
}

std::vector<CliqueSet::Clique> CliqueSet::canonical_list() const {
  std::vector<Clique> out;
  out.reserve(count_);
  for (const Clique& c : slots_)
    if (!c.empty()) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CliqueSet::Clique> CliqueSet::cliques_containing(QueryId v) const {
  std::vector<Clique> out;
  for (std::size_t slot : slots_containing(v)) out.push_back(slots_[slot]);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<CliqueSet::Clique> CliqueSet::largest_containing(
    QueryId v) const {
  const Clique* best = nullptr;
  for (std::size_t slot : slots_containing(v)) {
    const Clique& c = slots_[slot];
    if (!best || c.size() > best->size() ||
        (c.size() == best->size() && c < *best))
      best = &c;
  }
  if (!best) return std::nullopt;
  return *best;
}

void CliqueSet::insert(Clique members) {
  if (members.empty()) throw ConfigError("clique set: empty clique");
  for (std::size_t i = 1; i < members.size(); ++i)
    if (members[i - 1] >= members[i])
      throw ConfigError("clique set: members not strictly ascending");
  std::size_t slot;
  if (!free_slots_.empty()) {
    slot = free_slots_.back();
    free_slots_.pop_back();
    slots_[slot] = std::move(members);
  } else {
    slot = slots_.size();
    slots_.push_back(std::move(members));
  }
  for (QueryId v : slots_[slot]) index_[v].push_back(slot);
  ++count_;
}

void CliqueSet::erase_slot(std::size_t slot) {
  for (QueryId v : slots_[slot]) {
    auto& list = index_.at(v);
    list.erase(std::find(list.begin(), list.end(), slot));
    if (list.empty()) index_.erase(v);
  }
  slots_[slot].clear();
  free_slots_.push_back(slot);
  --count_;
}

void CliqueSet::clear() {
  slots_.clear();
  free_slots_.clear();
  index_.clear();
  count_ = 0;
}

namespace {

// Dense-index Bron-Kerbosch working state; all sets are ascending vectors.
struct BronKerbosch {
  const std::vector<std::vector<std::int32_t>>& adj;
  std::size_t limit;
  std::vector<CliqueSet::Clique>& out;
  const std::vector<QueryId>& ids;
  std::vector<std::int32_t> r;

  void expand(std::vector<std::int32_t> p, std::vector<std::int32_t> x) {
    if (p.empty() && x.empty()) {
      if (out.size() >= limit)
        throw EngineError("maximal clique listing exceeded " +
                          std::to_string(limit) + " cliques");
      CliqueSet::Clique c;
      c.reserve(r.size());
      for (std::int32_t v : r) c.push_back(ids[static_cast<std::size_t>(v)]);
      std::sort(c.begin(), c.end());
      out.push_back(std::move(c));
      return;
    }
    std::int32_t pivot = -1;
    std::size_t best = 0;
    auto consider = [&](std::int32_t u) {
      const auto& nu = adj[static_cast<std::size_t>(u)];
      std::size_t n = 0;
      auto it = p.begin();
      for (std::int32_t w : nu) {
        it = std::lower_bound(it, p.end(), w);
        if (it == p.end()) break;
        if (*it == w) ++n;
      }
      if (pivot < 0 || n > best || (n == best && u < pivot)) {
        pivot = u;
        best = n;
      }
    };
    for (std::int32_t u : p) consider(u);
    for (std::int32_t u : x) consider(u);

    std::vector<std::int32_t> ext;
    std::set_difference(p.begin(), p.end(),
                        adj[static_cast<std::size_t>(pivot)].begin(),
                        adj[static_cast<std::size_t>(pivot)].end(),
                        std::back_inserter(ext));
    for (std::int32_t v : ext) {
      const auto& nv = adj[static_cast<std::size_t>(v)];
      std::vector<std::int32_t> np, nx;
      std::set_intersection(p.begin(), p.end(), nv.begin(), nv.end(),
                            std::back_inserter(np));
      std::set_intersection(x.begin(), x.end(), nv.begin(), nv.end(),
                            std::back_inserter(nx));
      r.push_back(v);
      expand(std::move(np), std::move(nx));
      r.pop_back();
      p.erase(std::lower_bound(p.begin(), p.end(), v));
      auto xi = std::lower_bound(x.begin(), x.end(), v);
      x.insert(xi, v);
    }
  }
};

}  // namespace

std::vector<CliqueSet::Clique> maximal_cliques(
    const ConstraintGraph& g, const std::vector<QueryId>& nodes,
    std::size_t limit) {
  if (nodes.empty()) return {};
  std::vector<QueryId> ids = nodes;
  std::sort(ids.begin(), ids.end());
  std::unordered_map<QueryId, std::int32_t> dense;
  dense.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    dense.emplace(ids[i], static_cast<std::int32_t>(i));

  std::vector<std::vector<std::int32_t>> adj(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (QueryId n : g.neighbors(ids[i])) {
      auto it = dense.find(n);
      if (it != dense.end()) adj[i].push_back(it->second);
    }
    std::sort(adj[i].begin(), adj[i].end());
  }

  std::vector<CliqueSet::Clique> out;
  std::vector<std::int32_t> p(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    p[i] = static_cast<std::int32_t>(i);
  BronKerbosch bk{adj, limit, out, ids, {}};
  bk.expand(std::move(p), {});
  return out;
}

CliqueSet all_maximal_cliques(const ConstraintGraph& g, std::size_t limit) {
  CliqueSet s;
  for (auto& c : maximal_cliques(g, g.sorted_nodes(), limit))
    s.insert(std::move(c));
  return s;
}

void incremental_add_node(CliqueSet& s, const ConstraintGraph& g, QueryId v,
                          std::size_t limit) {
  if (!g.has_node(v))
    throw ConfigError("incremental add: node " + std::to_string(v) +
                      " not in graph");
  if (s.contains_node(v))
    throw ConfigError("incremental add: node " + std::to_string(v) +
                      " already covered by a clique");
  const std::vector<QueryId>& nb = g.neighbors(v);

  // Maximal cliques of the neighborhood each extend to a new maximal clique
  // containing v; existing cliques inside N(v) are no longer maximal.
  std::vector<CliqueSet::Clique> base = maximal_cliques(g, nb, limit);
  if (base.empty()) base.push_back({});

  std::vector<std::size_t> doomed;
  for (QueryId u : nb)
    for (std::size_t slot : s.slots_containing(u)) {
      const CliqueSet::Clique& c = s.slots_[slot];
      if (std::includes(nb.begin(), nb.end(), c.begin(), c.end()))
        doomed.push_back(slot);
    }
  std::sort(doomed.begin(), doomed.end());
  doomed.erase(std::unique(doomed.begin(), doomed.end()), doomed.end());
  for (std::size_t slot : doomed) s.erase_slot(slot);

  for (auto& c : base) {
    c.insert(std::lower_bound(c.begin(), c.end(), v), v);
    s.insert(std::move(c));
  }
}

void incremental_remove_node(CliqueSet& s, QueryId v) {
  if (!s.contains_node(v))
    throw ConfigError("incremental remove: node " + std::to_string(v) +
                      " not covered by any clique");
  std::vector<CliqueSet::Clique> reduced;
  for (std::size_t slot : s.slots_containing(v)) {
    CliqueSet::Clique c = s.slots_[slot];
    s.erase_slot(slot);
    c.erase(std::lower_bound(c.begin(), c.end(), v));
    if (!c.empty()) reduced.push_back(std::move(c));
  }
  // Larger candidates first so later (smaller or equal) ones are tested
  // against every clique that could contain them.
  std::sort(reduced.begin(), reduced.end(),
            [](const CliqueSet::Clique& a, const CliqueSet::Clique& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a < b;
            });
  reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());

  for (auto& c : reduced) {
    bool subsumed = false;
    const QueryId probe = c.front();
    for (std::size_t slot : s.slots_containing(probe)) {
      const CliqueSet::Clique& d = s.slots_[slot];
      if (d.size() >= c.size() &&
          std::includes(d.begin(), d.end(), c.begin(), c.end())) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) s.insert(std::move(c));
  }
}

}  // namespace meshcloak
