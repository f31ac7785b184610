#ifndef MESHCLOAK_SIMULATOR_HPP
#define MESHCLOAK_SIMULATOR_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "meshcloak/stream.hpp"
#include "meshcloak/street_map.hpp"

namespace meshcloak {

struct SpeedProfile {
  std::vector<double> speeds;  // m/s
  std::vector<double> speed_proportions;
  std::vector<std::int64_t> intervals;  // seconds between queries
  std::vector<double> interval_proportions;
  std::vector<std::int64_t> tolerances;  // candidate dt values
};

// Throws ConfigError on any violation: empty or mismatched lists,
// proportions outside [0,1] or not summing to 1 within 1e-9, non-positive
// speeds/intervals/tolerances, or max tolerance > min interval.
void validate_profile(const SpeedProfile& profile);

SpeedProfile profile_p1();
SpeedProfile profile_p2();

// Plain-text profile: `key=v1,v2,...` lines with keys speeds,
// speed_proportions, intervals, interval_proportions, tolerances;
// blank lines and `#` comments ignored.
SpeedProfile parse_profile(std::istream& in, const std::string& source);
SpeedProfile load_profile(const std::string& path);

struct SimUser {
  UserId id = 0;
  double speed = 0;  // constant for the user's lifetime
  std::int64_t interval = 0;
  int k = 2;
  std::int64_t dt = 1;
  std::int64_t first_query_time = 0;  // uniform integer in [0, 50]
  MapPosition pos;                    // initial on-street position

  double dc() const { return speed * static_cast<double>(interval); }
};

// Attribute sampling is split across named sub-streams of `seed`: "users"
// drives speed/interval/first-query-time/position, "k-assignment" drives k.
// Initial positions are uniform over total street length.
std::vector<SimUser> generate_users(const StreetMap& map,
                                    const SpeedProfile& profile,
                                    std::size_t n,
                                    std::pair<int, int> k_range,
                                    std::int64_t dt, std::uint64_t seed);

// Random-waypoint movement over shortest paths at the user's constant
// speed: pick a uniformly random reachable destination terminal, follow a
// shortest path, re-pick on arrival. Queries are emitted at
// first_query_time + j*interval for j in [0, queries_per_user), carrying
// the current position and dc = speed * interval. Output is sorted by
// (t, user). A user stuck at a terminal with no outgoing streets is an
// EngineError naming the terminal.
std::vector<QueryRecord> simulate(const StreetMap& map,
                                  const std::vector<SimUser>& users,
                                  std::size_t queries_per_user,
                                  std::uint64_t seed);

}  // namespace meshcloak

#endif  // MESHCLOAK_SIMULATOR_HPP
