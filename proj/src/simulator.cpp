#include "meshcloak/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <optional>
#include <queue>
#include <sstream>

#include "meshcloak/error.hpp"
#include "meshcloak/rng.hpp"

namespace meshcloak {

void validate_profile(const SpeedProfile& p) {
  auto check_dist = [](const std::vector<double>& props, std::size_t n,
                       const char* what) {
    if (props.size() != n)
      throw ConfigError(std::string("profile: ") + what +
                        " proportions do not match value count");
    double sum = 0;
    for (double v : props) {
      if (!(v >= 0.0 && v <= 1.0))
        throw ConfigError(std::string("profile: ") + what +
                          " proportion outside [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ConfigError(std::string("profile: ") + what +
                        " proportions do not sum to 1");
  };
  if (p.speeds.empty()) throw ConfigError("profile: no speeds");
  if (p.intervals.empty()) throw ConfigError("profile: no intervals");
  if (p.tolerances.empty()) throw ConfigError("profile: no tolerances");
  for (double s : p.speeds)
    if (!(s > 0)) throw ConfigError("profile: non-positive speed");
  for (auto i : p.intervals)
    if (i <= 0) throw ConfigError("profile: non-positive interval");
  for (auto t : p.tolerances)
    if (t <= 0) throw ConfigError("profile: non-positive tolerance");
  check_dist(p.speed_proportions, p.speeds.size(), "speed");
  check_dist(p.interval_proportions, p.intervals.size(), "interval");
  auto min_interval = *std::min_element(p.intervals.begin(), p.intervals.end());
  auto max_tol = *std::max_element(p.tolerances.begin(), p.tolerances.end());
  if (max_tol > min_interval)
    throw ConfigError("profile: max tolerance " + std::to_string(max_tol) +
                      " exceeds min query interval " +
                      std::to_string(min_interval));
}

SpeedProfile profile_p1() {
  return {{10, 20, 30, 50},
          {0.25, 0.25, 0.25, 0.25},
          {5, 10, 20},
          {0.5, 0.3, 0.2},
          {3, 4, 5}};
}

SpeedProfile profile_p2() {
  return {{10, 20, 30, 50},
          {0.25, 0.25, 0.25, 0.25},
          {20, 30},
          {0.5, 0.5},
          {3, 5, 7, 10}};
}

SpeedProfile parse_profile(std::istream& in, const std::string& source) {
  SpeedProfile p;
  std::string line;
  std::size_t lineno = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) +
                        ": expected key=v1,v2,...");
    std::string key = line.substr(0, eq);
    key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
    std::string rest = line.substr(eq + 1);
    for (char& c : rest)
      if (c == ',') c = ' ';
    std::istringstream ss(rest);
    std::vector<double> values;
    double v;
    while (ss >> v) values.push_back(v);
    if (!ss.eof())
      throw ConfigError(source + ":" + std::to_string(lineno) +
                        ": bad number in list");
    auto as_ints = [&] {
      std::vector<std::int64_t> out;
      for (double d : values) {
        auto i = static_cast<std::int64_t>(d);
        if (static_cast<double>(i) != d)
          throw ConfigError(source + ":" + std::to_string(lineno) +
                            ": expected integers for " + key);
        out.push_back(i);
      }
      return out;
    };
    if (key == "speeds")
      p.speeds = values;
    else if (key == "speed_proportions")
      p.speed_proportions = values;
    else if (key == "intervals")
      p.intervals = as_ints();
    else if (key == "interval_proportions")
      p.interval_proportions = values;
    else if (key == "tolerances")
      p.tolerances = as_ints();
    else
      throw ConfigError(source + ":" + std::to_string(lineno) +
                        ": unknown profile key '" + key + "'");
    any = true;
  }
  if (!any) throw ConfigError(source + ": empty profile");
  validate_profile(p);
  return p;
}

SpeedProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile file: " + path);
  return parse_profile(in, path);
}

std::vector<SimUser> generate_users(const StreetMap& map,
                                    const SpeedProfile& profile,
                                    std::size_t n,
                                    std::pair<int, int> k_range,
                                    std::int64_t dt, std::uint64_t seed) {
  validate_profile(profile);
  if (n < 1) throw ConfigError("generate_users: need at least one user");
  if (k_range.first < 2)
    throw ConfigError("generate_users: k range must start at 2 or above");
  if (k_range.second < k_range.first)
    throw ConfigError("generate_users: inverted k range");
  if (std::find(profile.tolerances.begin(), profile.tolerances.end(), dt) ==
      profile.tolerances.end())
    throw ConfigError("generate_users: dt " + std::to_string(dt) +
                      " not among profile tolerances");

  std::vector<double> prefix(map.street_count() + 1, 0.0);
  for (std::size_t i = 0; i < map.street_count(); ++i)
    prefix[i + 1] = prefix[i] + map.street_at(static_cast<std::int32_t>(i)).length;
  const double total = prefix.back();

  Rng root(seed);
  Rng attr = root.stream("users");
  Rng kgen = root.stream("k-assignment");

  std::vector<SimUser> users;
  users.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SimUser u;
    u.id = static_cast<UserId>(i);
    u.speed = profile.speeds[attr.pick_weighted(profile.speed_proportions)];
    u.interval =
        profile.intervals[attr.pick_weighted(profile.interval_proportions)];
    u.k = static_cast<int>(kgen.uniform_int(k_range.first, k_range.second));
    u.dt = dt;
    u.first_query_time = attr.uniform_int(0, 50);
    double r = attr.uniform_double(0.0, total);
    auto it = std::upper_bound(prefix.begin(), prefix.end(), r);
    auto idx = static_cast<std::int32_t>(it - prefix.begin() - 1);
    idx = std::min(idx, static_cast<std::int32_t>(map.street_count() - 1));
    u.pos.street = map.street_at(idx).id;
    u.pos.offset = std::min(r - prefix[static_cast<std::size_t>(idx)],
                            map.street_at(idx).length);
    users.push_back(u);
  }
  return users;
}

namespace {

struct Leg {
  std::int32_t street = -1;
  bool forward = true;  // traversed from -> to
};

// Reusable A*/BFS arrays with generation stamps so per-trip resets are O(1).
struct RouteScratch {
  std::vector<double> g;
  std::vector<std::int32_t> prev_terminal;
  std::vector<std::int32_t> prev_street;
  std::vector<std::uint32_t> open_stamp;
  std::vector<std::uint32_t> closed_stamp;
  std::uint32_t gen = 0;

  explicit RouteScratch(std::size_t n)
      : g(n), prev_terminal(n), prev_street(n), open_stamp(n, 0),
        closed_stamp(n, 0) {}
  void fresh() { ++gen; }
  bool open(std::int32_t v) const {
    return open_stamp[static_cast<std::size_t>(v)] == gen;
  }
  bool closed(std::int32_t v) const {
    return closed_stamp[static_cast<std::size_t>(v)] == gen;
  }
};

struct PositionExit {
  std::int32_t terminal;
  double cost;
};

std::vector<PositionExit> position_exits(const StreetMap& map,
                                         const MapPosition& pos) {
  const Street& s = map.street_by_id(pos.street);
  std::vector<PositionExit> exits;
  exits.push_back({map.terminal_index(s.to), s.length - pos.offset});
  if (!s.oneway) exits.push_back({map.terminal_index(s.from), pos.offset});
  return exits;
}

// A* from pos to the destination terminal; heuristic is straight-line
// distance, admissible because street lengths dominate their chords.
std::optional<std::vector<Leg>> route(const StreetMap& map,
                                      RouteScratch& scratch,
                                      const MapPosition& pos,
                                      std::int32_t dest, double& length_out) {
  scratch.fresh();
  const Terminal& d = map.terminal_at(dest);
  auto h = [&](std::int32_t v) {
    const Terminal& t = map.terminal_at(v);
    return std::hypot(t.x - d.x, t.y - d.y);
  };
  using Item = std::pair<double, std::int32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (const PositionExit& e : position_exits(map, pos)) {
    auto v = static_cast<std::size_t>(e.terminal);
    if (scratch.open(e.terminal) && scratch.g[v] <= e.cost) continue;
    scratch.g[v] = e.cost;
    scratch.prev_terminal[v] = -1;
    scratch.prev_street[v] = -1;
    scratch.open_stamp[v] = scratch.gen;
    heap.emplace(e.cost + h(e.terminal), e.terminal);
  }
  while (!heap.empty()) {
    auto [f, v] = heap.top();
    heap.pop();
    if (scratch.closed(v)) continue;
    scratch.closed_stamp[static_cast<std::size_t>(v)] = scratch.gen;
    if (v == dest) break;
    double gv = scratch.g[static_cast<std::size_t>(v)];
    for (const Arc& arc : map.out_arcs(v)) {
      auto w = static_cast<std::size_t>(arc.head);
      if (scratch.closed(arc.head)) continue;
      double nd = gv + map.street_at(arc.street).length;
      if (!scratch.open(arc.head) || nd < scratch.g[w]) {
        scratch.g[w] = nd;
        scratch.prev_terminal[w] = v;
        scratch.prev_street[w] = arc.street;
        scratch.open_stamp[w] = scratch.gen;
        heap.emplace(nd + h(arc.head), arc.head);
      }
    }
  }
  if (!scratch.closed(dest)) return std::nullopt;
  length_out = scratch.g[static_cast<std::size_t>(dest)];

  std::vector<Leg> legs;
  std::int32_t v = dest;
  while (scratch.prev_terminal[static_cast<std::size_t>(v)] != -1) {
    std::int32_t street = scratch.prev_street[static_cast<std::size_t>(v)];
    std::int32_t u = scratch.prev_terminal[static_cast<std::size_t>(v)];
    const Street& s = map.street_at(street);
    legs.push_back({street, map.terminal_index(s.from) == u});
    v = u;
  }
  const Street& home = map.street_by_id(pos.street);
  legs.push_back({map.street_index(pos.street),
                  v == map.terminal_index(home.to)});
  std::reverse(legs.begin(), legs.end());
  return legs;
}

std::vector<std::int32_t> reachable_terminals(const StreetMap& map,
                                              RouteScratch& scratch,
                                              const MapPosition& pos) {
  scratch.fresh();
  std::deque<std::int32_t> queue;
  std::vector<std::int32_t> seen;
  for (const PositionExit& e : position_exits(map, pos)) {
    if (scratch.open(e.terminal)) continue;
    scratch.open_stamp[static_cast<std::size_t>(e.terminal)] = scratch.gen;
    queue.push_back(e.terminal);
    seen.push_back(e.terminal);
  }
  while (!queue.empty()) {
    std::int32_t v = queue.front();
    queue.pop_front();
    for (const Arc& arc : map.out_arcs(v)) {
      if (scratch.open(arc.head)) continue;
      scratch.open_stamp[static_cast<std::size_t>(arc.head)] = scratch.gen;
      queue.push_back(arc.head);
      seen.push_back(arc.head);
    }
  }
  std::sort(seen.begin(), seen.end());
  return seen;
}

class Walker {
 public:
  Walker(const StreetMap& map, RouteScratch& scratch, const SimUser& user,
         Rng rng)
      : map_(map), scratch_(scratch), user_(user), rng_(std::move(rng)),
        pos_(user.pos) {}

  const MapPosition& position() const { return pos_; }

  void advance(double dist) {
    while (dist > 1e-12) {
      if (at_ == legs_.size()) plan();
      const Leg& leg = legs_[at_];
      const Street& s = map_.street_at(leg.street);
      double remaining = leg.forward ? s.length - pos_.offset : pos_.offset;
      if (remaining > dist) {
        pos_.offset += leg.forward ? dist : -dist;
        pos_.offset = std::clamp(pos_.offset, 0.0, s.length);
        return;
      }
      dist -= remaining;
      pos_.offset = leg.forward ? s.length : 0.0;
      ++at_;
      if (at_ < legs_.size()) {
        const Street& next = map_.street_at(legs_[at_].street);
        pos_.street = next.id;
        pos_.offset = legs_[at_].forward ? 0.0 : next.length;
      }
    }
  }

 private:
  void plan() {
    const auto n = static_cast<std::uint64_t>(map_.terminal_count());
    double length = 0;
    for (int attempt = 0; attempt < 32; ++attempt) {
      auto dest = static_cast<std::int32_t>(rng_.uniform_u64(n));
      auto legs = route(map_, scratch_, pos_, dest, length);
      if (legs && length > 0) {
        legs_ = std::move(*legs);
        at_ = 0;
        return;
      }
    }
    std::vector<std::int32_t> pool = reachable_terminals(map_, scratch_, pos_);
    while (!pool.empty()) {
      std::size_t i = rng_.uniform_u64(pool.size());
      std::int32_t dest = pool[i];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
      auto legs = route(map_, scratch_, pos_, dest, length);
      if (legs && length > 0) {
        legs_ = std::move(*legs);
        at_ = 0;
        return;
      }
    }
    TerminalId stuck =
        map_.terminal_at(position_exits(map_, pos_).front().terminal).id;
    throw EngineError("user " + std::to_string(user_.id) +
                      " stranded: terminal " + std::to_string(stuck) +
                      " has no outgoing streets");
  }

  const StreetMap& map_;
  RouteScratch& scratch_;
  const SimUser& user_;
  Rng rng_;
  MapPosition pos_;
  std::vector<Leg> legs_;
  std::size_t at_ = 0;
};

}  // namespace

std::vector<QueryRecord> simulate(const StreetMap& map,
                                  const std::vector<SimUser>& users,
                                  std::size_t queries_per_user,
                                  std::uint64_t seed) {
  if (queries_per_user < 1)
    throw ConfigError("simulate: need at least one query per user");
  Rng mobility = Rng(seed).stream("mobility");
  RouteScratch scratch(map.terminal_count());

  std::vector<QueryRecord> out;
  out.reserve(users.size() * queries_per_user);
  for (const SimUser& u : users) {
    map.validate_position(u.pos);
    Walker walker(map, scratch, u, mobility.stream(std::to_string(u.id)));
    for (std::size_t j = 0; j < queries_per_user; ++j) {
      double span = static_cast<double>(j == 0 ? u.first_query_time
                                               : u.interval);
      walker.advance(u.speed * span);
      QueryRecord r;
      r.t = u.first_query_time + static_cast<std::int64_t>(j) * u.interval;
      r.user = u.id;
      map.position_xy(walker.position(), r.x, r.y);
      r.k = u.k;
      r.dt = u.dt;
      r.dc = u.dc();
      out.push_back(r);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const QueryRecord& a, const QueryRecord& b) {
                     if (a.t != b.t) return a.t < b.t;
                     return a.user < b.user;
                   });
  return out;
}

}  // namespace meshcloak
