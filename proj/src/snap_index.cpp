#include "meshcloak/snap_index.hpp"

#include <algorithm>
#include <limits>

#include "meshcloak/error.hpp"

namespace meshcloak {

SnapIndex::SnapIndex(const StreetMap& map) : map_(&map) {
  std::vector<QuadPoint> points;
  points.reserve(map.terminal_count());
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(map.terminal_count()); ++i) {
    const Terminal& t = map.terminal_at(i);
    points.push_back({t.x, t.y, i});
  }
  terminals_ = std::make_unique<QuadTree>(points);

  incident_.assign(map.terminal_count(), {});
  for (std::int32_t s = 0; s < static_cast<std::int32_t>(map.street_count()); ++s) {
    const Street& st = map.street_at(s);
    incident_[map.terminal_index(st.from)].push_back(s);
    incident_[map.terminal_index(st.to)].push_back(s);
  }
}

MapPosition SnapIndex::snap(double x, double y, double max_snap) const {
  if (!(max_snap > 0.0)) {
    throw ConfigError("snap: max_snap must be positive");
  }
  const double half_width = max_snap + 0.5 * map_->max_street_length();
  std::vector<std::int64_t> nearby = terminals_->range_search(x, y, half_width);

  std::vector<std::int32_t> candidates;
  for (std::int64_t t : nearby) {
    const auto& inc = incident_[static_cast<std::size_t>(t)];
    candidates.insert(candidates.end(), inc.begin(), inc.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double best_dist = std::numeric_limits<double>::infinity();
  MapPosition best;
  StreetId best_id = 0;
  for (std::int32_t s : candidates) {
    double offset = 0.0;
    const double d = point_segment_distance(*map_, s, x, y, offset);
    const StreetId id = map_->street_at(s).id;
    if (d < best_dist || (d == best_dist && best.street >= 0 && id < best_id)) {
      best_dist = d;
      best = MapPosition{id, offset};
      best_id = id;
    }
  }
  if (!(best_dist <= max_snap)) {
    throw ConfigError("unsnappable location (" + std::to_string(x) + ", " +
                      std::to_string(y) + "): no street within " +
                      std::to_string(max_snap) + " m");
  }
  return best;
}

}  // namespace meshcloak
