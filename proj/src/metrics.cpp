#include "meshcloak/metrics.hpp"

#include <ostream>
#include <unordered_map>

#include "meshcloak/error.hpp"

namespace meshcloak {

MetricsReport compute_metrics(const EngineLog& log) {
  MetricsReport r;
  r.volume_series = log.ticks;
  r.admitted = log.admitted.size();
  r.rejected = log.rejected.size();
  r.succeeded = log.results.size();
  r.expired = log.expired.size();
  r.waiting = log.final_waiting;
  if (r.admitted == 0) {
    r.no_data = true;
    return r;
  }

  std::unordered_map<QueryId, const Query*> by_id;
  by_id.reserve(log.admitted.size());
  for (const Query& q : log.admitted) by_id.emplace(q.id, &q);

  if (r.succeeded + r.waiting > 0)
    r.success_rate = static_cast<double>(r.succeeded) /
                     static_cast<double>(r.succeeded + r.waiting);
  r.success_rate_total =
      static_cast<double>(r.succeeded) / static_cast<double>(r.admitted);

  double sum_rel_k = 0, sum_rel_dt = 0, sum_mesh = 0;
  for (const CloakingResult& res : log.results) {
    const Query& q = *by_id.at(res.query);
    sum_rel_k += static_cast<double>(res.members.size()) /
                 static_cast<double>(q.k);
    sum_rel_dt +=
        static_cast<double>(res.delay) / static_cast<double>(q.dt);
    sum_mesh += res.mesh.total_length;
  }
  if (r.succeeded > 0) {
    auto n = static_cast<double>(r.succeeded);
    r.rel_k = sum_rel_k / n;
    r.rel_dt = sum_rel_dt / n;
    r.avg_mesh_length = sum_mesh / n;
  }
  r.avg_ms_per_query = log.total_batch_ms() / static_cast<double>(r.admitted);
  return r;
}

void write_report(std::ostream& out, const MetricsReport& r,
                  const std::string& label) {
  out.precision(17);
  out << "label=" << label << '\n'
      << "no_data=" << (r.no_data ? 1 : 0) << '\n'
      << "success_rate=" << r.success_rate << '\n'
      << "success_rate_total=" << r.success_rate_total << '\n'
      << "avg_ms_per_query=" << r.avg_ms_per_query << '\n'
      << "avg_mesh_length=" << r.avg_mesh_length << '\n'
      << "rel_k=" << r.rel_k << '\n'
      << "rel_dt=" << r.rel_dt << '\n'
      << "admitted=" << r.admitted << '\n'
      << "rejected=" << r.rejected << '\n'
      << "succeeded=" << r.succeeded << '\n'
      << "expired=" << r.expired << '\n'
      << "waiting=" << r.waiting << '\n';
}

void write_report_csv_header(std::ostream& out) {
  out << "label,no_data,success_rate,success_rate_total,avg_ms_per_query,"
         "avg_mesh_length,rel_k,rel_dt,admitted,rejected,succeeded,expired,"
         "waiting\n";
}

void write_report_csv_row(std::ostream& out, const MetricsReport& r,
                          const std::string& label) {
  out.precision(17);
  out << label << ',' << (r.no_data ? 1 : 0) << ',' << r.success_rate << ','
      << r.success_rate_total << ',' << r.avg_ms_per_query << ','
      << r.avg_mesh_length << ',' << r.rel_k << ',' << r.rel_dt << ','
      << r.admitted << ',' << r.rejected << ',' << r.succeeded << ','
      << r.expired << ',' << r.waiting << '\n';
}

}  // namespace meshcloak
