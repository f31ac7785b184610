#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "meshcloak/metrics.hpp"

using namespace meshcloak;

namespace {

Query plain_query(QueryId id, int k, std::int64_t dt) {
  Query q;
  q.id = id;
  q.user = id;
  q.k = k;
  q.dt = dt;
  return q;
}

CloakingResult result_for(QueryId id, std::size_t clique_size,
                          std::int64_t delay, double mesh_length) {
  CloakingResult r;
  r.query = id;
  for (std::size_t i = 0; i < clique_size; ++i)
    r.members.push_back(id * 100 + static_cast<QueryId>(i));
  r.mesh.total_length = mesh_length;
  r.delay = delay;
  return r;
}

}  // namespace

TEST_CASE("an empty log reports no data") {
  MetricsReport r = compute_metrics({});
  CHECK(r.no_data);
  CHECK(r.admitted == 0);
  CHECK(r.success_rate == 0.0);
  CHECK(r.success_rate_total == 0.0);
  CHECK(r.rel_k == 0.0);
  CHECK(r.volume_series.empty());
}

TEST_CASE("ratios over a synthetic run") {
  EngineLog log;
  // 12 admitted: 8 succeed, 2 expire, 2 still waiting at drain.
  for (QueryId id = 0; id < 12; ++id)
    log.admitted.push_back(plain_query(id, id < 4 ? 2 : 4, 4));
  for (QueryId id = 0; id < 4; ++id)
    log.results.push_back(result_for(id, 3, 0, 100.0));
  for (QueryId id = 4; id < 8; ++id)
    log.results.push_back(result_for(id, 4, 2, 300.0));
  log.expired = {{9, 8}, {9, 9}};
  log.final_waiting = 2;
  log.ticks.resize(2);
  log.ticks[0].batch_ms = 4.0;
  log.ticks[1].batch_ms = 2.0;

  MetricsReport r = compute_metrics(log);
  CHECK_FALSE(r.no_data);
  CHECK(r.admitted == 12);
  CHECK(r.succeeded == 8);
  CHECK(r.expired == 2);
  CHECK(r.waiting == 2);
  // Expired queries leave the success-rate denominator entirely.
  CHECK(r.success_rate == doctest::Approx(0.8));
  CHECK(r.success_rate_total == doctest::Approx(8.0 / 12.0));
  // Four cliques of 3 at k=2 (1.5) and four of 4 at k=4 (1.0).
  CHECK(r.rel_k == doctest::Approx(1.25));
  // Four delays of 0 and four of 2 against dt=4.
  CHECK(r.rel_dt == doctest::Approx(0.25));
  CHECK(r.avg_mesh_length == doctest::Approx(200.0));
  CHECK(r.avg_ms_per_query == doctest::Approx(0.5));
  CHECK(r.volume_series.size() == 2);
}

TEST_CASE("all-expired runs divide safely") {
  EngineLog log;
  for (QueryId id = 0; id < 3; ++id) {
    log.admitted.push_back(plain_query(id, 2, 1));
    log.expired.emplace_back(5, id);
  }
  MetricsReport r = compute_metrics(log);
  CHECK_FALSE(r.no_data);
  CHECK(r.success_rate == 0.0);
  CHECK(r.success_rate_total == 0.0);
  CHECK(r.rel_k == 0.0);
  CHECK(r.rel_dt == 0.0);
  CHECK(r.avg_mesh_length == 0.0);
}

TEST_CASE("report formats") {
  EngineLog log;
  for (QueryId id = 0; id < 16; ++id)
    log.admitted.push_back(plain_query(id, 2, 4));
  for (QueryId id = 0; id < 8; ++id)
    log.results.push_back(result_for(id, 2, 0, 100.0));
  log.final_waiting = 8;
  log.rejected.emplace_back(plain_query(99, 1, 4), "k below 2");
  log.ticks.resize(2);
  log.ticks[0].batch_ms = 5.0;
  log.ticks[1].batch_ms = 3.0;

  MetricsReport r = compute_metrics(log);

  std::ostringstream report;
  write_report(report, r, "demo");
  CHECK(report.str() ==
        "label=demo\n"
        "no_data=0\n"
        "success_rate=0.5\n"
        "success_rate_total=0.5\n"
        "avg_ms_per_query=0.5\n"
        "avg_mesh_length=100\n"
        "rel_k=1\n"
        "rel_dt=0\n"
        "admitted=16\n"
        "rejected=1\n"
        "succeeded=8\n"
        "expired=0\n"
        "waiting=8\n");

  std::ostringstream csv;
  write_report_csv_header(csv);
  write_report_csv_row(csv, r, "demo");
  CHECK(csv.str() ==
        "label,no_data,success_rate,success_rate_total,avg_ms_per_query,"
        "avg_mesh_length,rel_k,rel_dt,admitted,rejected,succeeded,expired,"
        "waiting\n"
        "demo,0,0.5,0.5,0.5,100,1,0,16,1,8,0,8\n");
}
