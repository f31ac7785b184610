#ifndef MESHCLOAK_STREAM_HPP
#define MESHCLOAK_STREAM_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "meshcloak/query.hpp"
#include "meshcloak/street_map.hpp"

namespace meshcloak {

// One line of a query stream file; positions are raw coordinates and get
// snapped to the map only when the stream enters an engine.
struct QueryRecord {
  std::int64_t t = 0;
  UserId user = 0;
  double x = 0;
  double y = 0;
  int k = 2;
  std::int64_t dt = 1;
  double dc = 0;
};

// CSV with header `t,user,x,y,k,dt,dc`, rows sorted by t.
void write_stream_csv(std::ostream& out, const std::vector<QueryRecord>& recs);
std::vector<QueryRecord> read_stream_csv(std::istream& in,
                                         const std::string& source);
std::vector<QueryRecord> load_stream(const std::string& path);
void save_stream(const std::string& path, const std::vector<QueryRecord>& recs);

// Snaps every record onto the map and assigns query ids 0..n-1 in stream
// order. A record farther than max_snap from every street is a ConfigError.
std::vector<Query> snap_stream(const StreetMap& map,
                               const std::vector<QueryRecord>& recs,
                               double max_snap);

}  // namespace meshcloak

#endif  // MESHCLOAK_STREAM_HPP
