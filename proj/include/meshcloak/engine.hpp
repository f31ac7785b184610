#ifndef MESHCLOAK_ENGINE_HPP
#define MESHCLOAK_ENGINE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "meshcloak/cliques.hpp"
#include "meshcloak/constraint_graph.hpp"
#include "meshcloak/distance.hpp"
#include "meshcloak/mesh.hpp"
#include "meshcloak/query.hpp"
#include "meshcloak/street_map.hpp"

namespace meshcloak {

struct EngineConfig {
  EdgeRule edge_rule = EdgeRule::literal;
  MeshMode mesh_mode = MeshMode::literal;
  // Default: success is per query, so one clique can be emitted repeatedly
  // with overlapping membership. Atomic mode instead retires a whole clique
  // at once, and only when its size satisfies every member's k.
  bool atomic_cliques = false;
  std::size_t clique_limit = kDefaultCliqueLimit;
};

struct CloakingResult {
  QueryId query = -1;
  std::vector<QueryId> members;  // ascending; contains `query`
  CloakingMesh mesh;
  std::int64_t cloak_time = 0;
  std::int64_t delay = 0;  // cloak_time - arrival t
};

struct TickRow {
  std::int64_t tick = 0;
  std::size_t new_count = 0;   // admitted this tick
  std::size_t waiting = 0;     // waiting after the batch
  std::size_t succeeded = 0;   // this tick
  std::size_t expired = 0;     // this tick
  std::size_t cg_nodes = 0;
  std::size_t cg_edges = 0;
  double batch_ms = 0;  // CG build + clique listing + selection/mesh only
};

struct EngineLog {
  std::vector<TickRow> ticks;
  std::vector<CloakingResult> results;
  std::vector<Query> admitted;  // admission order
  std::vector<std::pair<Query, std::string>> rejected;
  std::vector<std::pair<std::int64_t, QueryId>> expired;  // (tick, id)
  std::size_t final_waiting = 0;

  double total_batch_ms() const;
};

struct StepOutcome {
  std::vector<CloakingResult> results;
  std::vector<QueryId> expired;
};

// Batch engine: one step per simulated second. Each step expires overdue
// queries, admits the tick's arrivals, rebuilds the constraint graph over
// everything waiting, lists its maximal cliques once, then walks the waiting
// set in (t, id) order giving each query the largest clique containing it.
class CloakingEngine {
 public:
  CloakingEngine(const StreetMap& map, const BoundedDistanceMatrix& matrix,
                 EngineConfig config = {});

  // `now` must strictly increase across calls; arrivals with t > now are
  // rejected per query, as are dc > dc_max, bad k/dt, and duplicate ids.
  StepOutcome step(std::int64_t now, const std::vector<Query>& new_queries);

  std::size_t waiting_count() const { return waiting_.size(); }
  const EngineLog& log() const { return log_; }
  EngineLog take_log();

 private:
  const StreetMap& map_;
  const BoundedDistanceMatrix& matrix_;
  EngineConfig config_;
  std::unordered_map<QueryId, Query> waiting_;
  std::unordered_set<QueryId> seen_ids_;
  std::int64_t last_now_ = 0;
  bool started_ = false;
  EngineLog log_;
};

// Drives the batch engine from the first arrival to last arrival + max dt.
// Stream must be sorted by t (ids unique); an empty stream gives an empty log.
EngineLog run_batch(const StreetMap& map, const BoundedDistanceMatrix& matrix,
                    const EngineConfig& config,
                    const std::vector<Query>& stream);

// Node-based baseline: queries are handled one at a time. An arrival is
// linked into the constraint graph by distance checks against every waiting
// query, the clique set is maintained incrementally, and only cliques
// containing the new node are candidates for success. Ticks cover the same
// range as run_batch so both modes drain to the same final state.
EngineLog run_sequential(const StreetMap& map,
                         const BoundedDistanceMatrix& matrix,
                         const EngineConfig& config,
                         const std::vector<Query>& stream);

// `tick,new,waiting,succeeded,expired,cg_nodes,cg_edges,batch_ms`
void write_ticks_csv(std::ostream& out, const EngineLog& log);
// `query_id,user_id,k,clique_size,delay,mesh_len`
void write_results_csv(std::ostream& out, const EngineLog& log);

}  // namespace meshcloak

#endif  // MESHCLOAK_ENGINE_HPP
