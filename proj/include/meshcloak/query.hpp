#ifndef MESHCLOAK_QUERY_HPP
#define MESHCLOAK_QUERY_HPP

#include <cstdint>

#include "meshcloak/street_map.hpp"

namespace meshcloak {

using QueryId = std::int64_t;
using UserId = std::int64_t;

// One personalized continuous-query record, already snapped to the map.
struct Query {
  QueryId id = 0;
  UserId user = 0;
  int k = 2;             // requested anonymity level, >= 2
  std::int64_t t = 0;    // arrival time, simulation seconds
  MapPosition pos;       // on-street location
  std::int64_t dt = 1;   // temporal tolerance, seconds
  double dc = 0.0;       // distance constraint, meters
};

enum class QueryState { NEW, WAITING, EXPIRED, SUCCEEDED };

inline bool legal_transition(QueryState from, QueryState to) {
  return (from == QueryState::NEW && to == QueryState::WAITING) ||
         (from == QueryState::WAITING && to == QueryState::EXPIRED) ||
         (from == QueryState::WAITING && to == QueryState::SUCCEEDED);
}

const char* to_string(QueryState s);

}  // namespace meshcloak

#endif  // MESHCLOAK_QUERY_HPP
