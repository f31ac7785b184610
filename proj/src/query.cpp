#include "meshcloak/query.hpp"

namespace meshcloak {

const char* to_string(QueryState s) {
  switch (s) {
    case QueryState::NEW:
      return "NEW";
    case QueryState::WAITING:
      return "WAITING";
    case QueryState::EXPIRED:
      return "EXPIRED";
    case QueryState::SUCCEEDED:
      return "SUCCEEDED";
  }
  return "?";
}

}  // namespace meshcloak
