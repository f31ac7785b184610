#ifndef MESHCLOAK_METRICS_HPP
#define MESHCLOAK_METRICS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "meshcloak/engine.hpp"

namespace meshcloak {

struct MetricsReport {
  bool no_data = false;
  // succeeded / (succeeded + waiting-at-drain); expired queries are not in
  // the denominator. success_rate_total divides by all admitted instead.
  double success_rate = 0;
  double success_rate_total = 0;
  double avg_ms_per_query = 0;
  double avg_mesh_length = 0;
  double rel_k = 0;   // mean clique_size / k over succeeded queries
  double rel_dt = 0;  // mean delay / dt over succeeded queries

  std::size_t admitted = 0;
  std::size_t rejected = 0;
  std::size_t succeeded = 0;
  std::size_t expired = 0;
  std::size_t waiting = 0;
  std::vector<TickRow> volume_series;
};

MetricsReport compute_metrics(const EngineLog& log);

// key=value lines, one per field, prefixed with the configuration label
// (e.g. P1-3-5 = profile P1, dt 3, k range up to 5).
void write_report(std::ostream& out, const MetricsReport& report,
                  const std::string& label);

void write_report_csv_header(std::ostream& out);
void write_report_csv_row(std::ostream& out, const MetricsReport& report,
                          const std::string& label);

}  // namespace meshcloak

#endif  // MESHCLOAK_METRICS_HPP
