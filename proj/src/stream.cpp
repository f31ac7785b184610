#include "meshcloak/stream.hpp"

#include <fstream>
#include <sstream>

#include "meshcloak/error.hpp"
#include "meshcloak/snap_index.hpp"

namespace meshcloak {

namespace {

constexpr const char* kHeader = "t,user,x,y,k,dt,dc";

[[noreturn]] void fail(const std::string& source, std::size_t line,
                       const std::string& msg) {
  throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

void write_stream_csv(std::ostream& out,
                      const std::vector<QueryRecord>& recs) {
  out << kHeader << '\n';
  out.precision(17);
  for (const QueryRecord& r : recs)
    out << r.t << ',' << r.user << ',' << r.x << ',' << r.y << ',' << r.k
        << ',' << r.dt << ',' << r.dc << '\n';
}

std::vector<QueryRecord> read_stream_csv(std::istream& in,
                                         const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) fail(source, 1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    fail(source, 1, "bad header, expected '" + std::string(kHeader) + "'");

  std::vector<QueryRecord> recs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    QueryRecord r;
    if (!(ss >> r.t >> r.user >> r.x >> r.y >> r.k >> r.dt >> r.dc))
      fail(source, lineno, "malformed row");
    std::string extra;
    if (ss >> extra) fail(source, lineno, "trailing fields");
    if (!recs.empty() && r.t < recs.back().t)
      fail(source, lineno, "timestamps not sorted");
    recs.push_back(r);
  }
  return recs;
}

std::vector<QueryRecord> load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stream file: " + path);
  return read_stream_csv(in, path);
}

void save_stream(const std::string& path,
                 const std::vector<QueryRecord>& recs) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write stream file: " + path);
  write_stream_csv(out, recs);
  if (!out) throw ConfigError("write failed: " + path);
}

std::vector<Query> snap_stream(const StreetMap& map,
                               const std::vector<QueryRecord>& recs,
                               double max_snap) {
  SnapIndex index(map);
  std::vector<Query> queries;
  queries.reserve(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const QueryRecord& r = recs[i];
    Query q;
    q.id = static_cast<QueryId>(i);
    q.user = r.user;
    q.k = r.k;
    q.t = r.t;
    q.dt = r.dt;
    q.dc = r.dc;
    q.pos = index.snap(r.x, r.y, max_snap);
    queries.push_back(q);
  }
  return queries;
}

}  // namespace meshcloak
