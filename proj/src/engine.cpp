#include "meshcloak/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>

#include "meshcloak/error.hpp"

namespace meshcloak {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::optional<std::string> admission_error(
    const Query& q, std::int64_t now, const StreetMap& map,
    const BoundedDistanceMatrix& matrix,
    const std::unordered_set<QueryId>& seen) {
  if (seen.count(q.id)) return "duplicate query id";
  if (q.t > now) return "arrival timestamp in the future";
  if (q.k < 2) return "k below 2";
  if (q.dt <= 0) return "non-positive dt";
  if (!(q.dc >= 0)) return "negative dc";
  if (q.dc > matrix.dc_max()) return "dc exceeds matrix bound";
  try {
    map.validate_position(q.pos);
  } catch (const ConfigError& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

std::vector<std::pair<MapPosition, double>> member_inputs(
    const std::vector<QueryId>& members,
    const std::unordered_map<QueryId, Query>& waiting) {
  std::vector<std::pair<MapPosition, double>> in;
  in.reserve(members.size());
  for (QueryId m : members) {
    const Query& q = waiting.at(m);
    in.emplace_back(q.pos, q.dc);
  }
  return in;
}

void sort_by_arrival(std::vector<Query>& qs) {
  std::sort(qs.begin(), qs.end(), [](const Query& a, const Query& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.id < b.id;
  });
}

void check_stream_sorted(const std::vector<Query>& stream) {
  for (std::size_t i = 1; i < stream.size(); ++i)
    if (stream[i].t < stream[i - 1].t)
      throw ConfigError("query stream not sorted by arrival time");
}

}  // namespace

double EngineLog::total_batch_ms() const {
  double total = 0;
  for (const TickRow& row : ticks) total += row.batch_ms;
  return total;
}

CloakingEngine::CloakingEngine(const StreetMap& map,
                               const BoundedDistanceMatrix& matrix,
                               EngineConfig config)
    : map_(map), matrix_(matrix), config_(config) {}

EngineLog CloakingEngine::take_log() {
  log_.final_waiting = waiting_.size();
  return std::move(log_);
}

StepOutcome CloakingEngine::step(std::int64_t now,
                                 const std::vector<Query>& new_queries) {
  if (started_ && now <= last_now_)
    throw EngineError("engine clock must strictly increase (" +
                      std::to_string(now) + " after " +
                      std::to_string(last_now_) + ")");
  started_ = true;
  last_now_ = now;

  StepOutcome out;

  for (auto it = waiting_.begin(); it != waiting_.end();) {
    if (it->second.t + it->second.dt < now) {
      out.expired.push_back(it->first);
      it = waiting_.erase(it);
    } else {
      ++it;
    }
  }
  std::sort(out.expired.begin(), out.expired.end());

  std::size_t admitted = 0;
  for (const Query& q : new_queries) {
    if (auto err = admission_error(q, now, map_, matrix_, seen_ids_)) {
      log_.rejected.emplace_back(q, *err);
      continue;
    }
    seen_ids_.insert(q.id);
    log_.admitted.push_back(q);
    ++admitted;
    if (q.t + q.dt < now)  // dead on arrival: straight to EXPIRED
      out.expired.push_back(q.id);
    else
      waiting_.emplace(q.id, q);
  }

  auto t0 = Clock::now();

  std::vector<Query> ws;
  ws.reserve(waiting_.size());
  for (const auto& [id, q] : waiting_) ws.push_back(q);
  sort_by_arrival(ws);

  ConstraintGraph cg =
      build_constraint_graph(ws, matrix_, map_, config_.edge_rule);
  CliqueSet cliques = all_maximal_cliques(cg, config_.clique_limit);

  std::map<std::vector<QueryId>, CloakingMesh> mesh_cache;
  auto mesh_for = [&](const std::vector<QueryId>& members) {
    auto it = mesh_cache.find(members);
    if (it == mesh_cache.end())
      it = mesh_cache
               .emplace(members,
                        cloaking_mesh(map_, member_inputs(members, waiting_),
                                      config_.mesh_mode))
               .first;
    return it->second;
  };
  auto emit = [&](const Query& q, const std::vector<QueryId>& members) {
    CloakingResult r;
    r.query = q.id;
    r.members = members;
    r.mesh = mesh_for(members);
    r.cloak_time = now;
    r.delay = now - q.t;
    out.results.push_back(r);
    log_.results.push_back(std::move(r));
  };

  std::vector<QueryId> retired;
  if (!config_.atomic_cliques) {
    for (const Query& q : ws) {
      auto cl = cliques.largest_containing(q.id);
      if (!cl || cl->size() < static_cast<std::size_t>(q.k)) continue;
      emit(q, *cl);
      retired.push_back(q.id);
    }
  } else {
    std::unordered_set<QueryId> gone;
    for (const Query& q : ws) {
      if (gone.count(q.id)) continue;
      auto cl = cliques.largest_containing(q.id);
      if (!cl) continue;
      bool ok = true;
      for (QueryId m : *cl)
        if (gone.count(m) ||
            cl->size() < static_cast<std::size_t>(waiting_.at(m).k)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      for (QueryId m : *cl) {
        emit(waiting_.at(m), *cl);
        gone.insert(m);
        retired.push_back(m);
      }
    }
  }
  for (QueryId id : retired) waiting_.erase(id);

  double ms = ms_since(t0);

  TickRow row;
  row.tick = now;
  row.new_count = admitted;
  row.waiting = waiting_.size();
  row.succeeded = retired.size();
  row.expired = out.expired.size();
  row.cg_nodes = cg.node_count();
  row.cg_edges = cg.edge_count();
  row.batch_ms = ms;
  log_.ticks.push_back(row);
  for (QueryId id : out.expired) log_.expired.emplace_back(now, id);

  return out;
}

EngineLog run_batch(const StreetMap& map, const BoundedDistanceMatrix& matrix,
                    const EngineConfig& config,
                    const std::vector<Query>& stream) {
  check_stream_sorted(stream);
  if (stream.empty()) return {};

  std::int64_t max_dt = 0;
  for (const Query& q : stream) max_dt = std::max(max_dt, q.dt);
  const std::int64_t first = stream.front().t;
  const std::int64_t last = stream.back().t + max_dt;

  CloakingEngine engine(map, matrix, config);
  std::size_t next = 0;
  for (std::int64_t now = first; now <= last; ++now) {
    std::vector<Query> batch;
    while (next < stream.size() && stream[next].t == now)
      batch.push_back(stream[next++]);
    engine.step(now, batch);
  }
  return engine.take_log();
}

EngineLog run_sequential(const StreetMap& map,
                         const BoundedDistanceMatrix& matrix,
                         const EngineConfig& config,
                         const std::vector<Query>& stream) {
  check_stream_sorted(stream);
  EngineLog log;
  if (stream.empty()) return log;

  std::int64_t max_dt = 0;
  for (const Query& q : stream) max_dt = std::max(max_dt, q.dt);
  const std::int64_t first = stream.front().t;
  const std::int64_t last = stream.back().t + max_dt;

  std::unordered_map<QueryId, Query> waiting;
  std::unordered_set<QueryId> seen;
  ConstraintGraph cg;
  CliqueSet cliques;

  auto drop = [&](QueryId id) {
    cg.remove_node(id);
    incremental_remove_node(cliques, id);
    waiting.erase(id);
  };

  std::size_t next = 0;
  for (std::int64_t now = first; now <= last; ++now) {
    std::size_t admitted = 0, succeeded = 0;
    double ms = 0;

    std::vector<QueryId> expired_now;
    for (const auto& [id, q] : waiting)
      if (q.t + q.dt < now) expired_now.push_back(id);
    std::sort(expired_now.begin(), expired_now.end());
    auto texp = Clock::now();
    for (QueryId id : expired_now) drop(id);
    ms += ms_since(texp);

    std::vector<Query> arrivals;
    while (next < stream.size() && stream[next].t == now)
      arrivals.push_back(stream[next++]);
    sort_by_arrival(arrivals);

    for (const Query& q : arrivals) {
      if (auto err = admission_error(q, now, map, matrix, seen)) {
        log.rejected.emplace_back(q, *err);
        continue;
      }
      seen.insert(q.id);
      log.admitted.push_back(q);
      ++admitted;
      if (q.t + q.dt < now) {
        expired_now.push_back(q.id);
        continue;
      }

      auto t0 = Clock::now();
      std::vector<QueryId> nbrs;
      for (const auto& [id, w] : waiting)
        if (covers(q, w, matrix, map, config.edge_rule) &&
            covers(w, q, matrix, map, config.edge_rule))
          nbrs.push_back(id);
      std::sort(nbrs.begin(), nbrs.end());

      cg.add_node(q.id, nbrs);
      incremental_add_node(cliques, cg, q.id, config.clique_limit);
      waiting.emplace(q.id, q);

      std::vector<QueryId> cand{q.id};
      for (const auto& c : cliques.cliques_containing(q.id))
        cand.insert(cand.end(), c.begin(), c.end());
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      std::sort(cand.begin(), cand.end(), [&](QueryId a, QueryId b) {
        const Query& qa = waiting.at(a);
        const Query& qb = waiting.at(b);
        if (qa.t != qb.t) return qa.t < qb.t;
        return a < b;
      });

      std::vector<QueryId> retired;
      for (QueryId id : cand) {
        const Query& c = waiting.at(id);
        auto cl = cliques.largest_containing(id);
        if (!cl || cl->size() < static_cast<std::size_t>(c.k)) continue;
        CloakingResult r;
        r.query = id;
        r.members = *cl;
        r.mesh = cloaking_mesh(map, member_inputs(*cl, waiting),
                               config.mesh_mode);
        r.cloak_time = now;
        r.delay = now - c.t;
        log.results.push_back(std::move(r));
        retired.push_back(id);
      }
      for (QueryId id : retired) drop(id);
      succeeded += retired.size();
      ms += ms_since(t0);
    }

    TickRow row;
    row.tick = now;
    row.new_count = admitted;
    row.waiting = waiting.size();
    row.succeeded = succeeded;
    row.expired = expired_now.size();
    row.cg_nodes = cg.node_count();
    row.cg_edges = cg.edge_count();
    row.batch_ms = ms;
    log.ticks.push_back(row);
    for (QueryId id : expired_now) log.expired.emplace_back(now, id);
  }
  log.final_waiting = waiting.size();
  return log;
}

void write_ticks_csv(std::ostream& out, const EngineLog& log) {
  out << "tick,new,waiting,succeeded,expired,cg_nodes,cg_edges,batch_ms\n";
  out.precision(17);
  for (const TickRow& r : log.ticks)
    out << r.tick << ',' << r.new_count << ',' << r.waiting << ','
        << r.succeeded << ',' << r.expired << ',' << r.cg_nodes << ','
        << r.cg_edges << ',' << r.batch_ms << '\n';
}

void write_results_csv(std::ostream& out, const EngineLog& log) {
  std::unordered_map<QueryId, const Query*> by_id;
  for (const Query& q : log.admitted) by_id.emplace(q.id, &q);
  out << "query_id,user_id,k,clique_size,delay,mesh_len\n";
  out.precision(17);
  for (const CloakingResult& r : log.results) {
    const Query& q = *by_id.at(r.query);
    out << r.query << ',' << q.user << ',' << q.k << ',' << r.members.size()
        << ',' << r.delay << ',' << r.mesh.total_length << '\n';
  }
}

}  // namespace meshcloak
