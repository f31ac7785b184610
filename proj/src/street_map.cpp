#include "meshcloak/street_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "meshcloak/error.hpp"

namespace meshcloak {

namespace {

constexpr double kLengthTolerance = 1e-6;  // meters

double euclid(double ax, double ay, double bx, double by) {
  const double dx = ax - bx;
  const double dy = ay - by;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

StreetMap::StreetMap(std::vector<Terminal> terminals, std::vector<Street> streets)
    : terminals_(std::move(terminals)), streets_(std::move(streets)) {
  terminal_index_.reserve(terminals_.size());
  for (std::size_t i = 0; i < terminals_.size(); ++i) {
    const Terminal& t = terminals_[i];
    if (!std::isfinite(t.x) || !std::isfinite(t.y)) {
      throw ConfigError("terminal " + std::to_string(t.id) + ": non-finite coordinates");
    }
    if (!terminal_index_.emplace(t.id, static_cast<std::int32_t>(i)).second) {
      throw ConfigError("duplicate terminal id " + std::to_string(t.id));
    }
  }

  out_arcs_.assign(terminals_.size(), {});
  street_index_.reserve(streets_.size());
  for (std::size_t i = 0; i < streets_.size(); ++i) {
    const Street& s = streets_[i];
    if (!street_index_.emplace(s.id, static_cast<std::int32_t>(i)).second) {
      throw ConfigError("duplicate street id " + std::to_string(s.id));
    }
    if (s.from == s.to) {
      throw ConfigError("street " + std::to_string(s.id) + ": self-loop rejected");
    }
    auto from_it = terminal_index_.find(s.from);
    auto to_it = terminal_index_.find(s.to);
    if (from_it == terminal_index_.end() || to_it == terminal_index_.end()) {
      throw ConfigError("street " + std::to_string(s.id) + ": dangling endpoint");
    }
    if (!(s.length > 0.0) || !std::isfinite(s.length)) {
      throw ConfigError("street " + std::to_string(s.id) + ": non-positive length");
    }
    const Terminal& a = terminals_[from_it->second];
    const Terminal& b = terminals_[to_it->second];
    const double straight = euclid(a.x, a.y, b.x, b.y);
    if (s.length < straight - kLengthTolerance) {
      throw ConfigError("street " + std::to_string(s.id) + ": declared length " +
                        std::to_string(s.length) + " below straight-line distance " +
                        std::to_string(straight));
    }
    const auto si = static_cast<std::int32_t>(i);
    out_arcs_[from_it->second].push_back(Arc{si, to_it->second});
    if (!s.oneway) {
      out_arcs_[to_it->second].push_back(Arc{si, from_it->second});
    }
    max_street_length_ = std::max(max_street_length_, s.length);
    total_street_length_ += s.length;
  }

  min_x_ = min_y_ = std::numeric_limits<double>::infinity();
  max_x_ = max_y_ = -std::numeric_limits<double>::infinity();
  for (const Terminal& t : terminals_) {
    min_x_ = std::min(min_x_, t.x);
    min_y_ = std::min(min_y_, t.y);
    max_x_ = std::max(max_x_, t.x);
    max_y_ = std::max(max_y_, t.y);
  }
}

std::int32_t StreetMap::terminal_index(TerminalId id) const {
  auto it = terminal_index_.find(id);
  if (it == terminal_index_.end()) {
    throw ConfigError("unknown terminal id " + std::to_string(id));
  }
  return it->second;
}

std::int32_t StreetMap::street_index(StreetId id) const {
  auto it = street_index_.find(id);
  if (it == street_index_.end()) {
    throw ConfigError("unknown street id " + std::to_string(id));
  }
  return it->second;
}

void StreetMap::position_xy(const MapPosition& pos, double& x, double& y) const {
  const Street& s = streets_[street_index(pos.street)];
  const Terminal& a = terminals_[terminal_index_.at(s.from)];
  const Terminal& b = terminals_[terminal_index_.at(s.to)];
  const double f = pos.offset / s.length;
  x = a.x + (b.x - a.x) * f;
  y = a.y + (b.y - a.y) * f;
}

void StreetMap::validate_position(const MapPosition& pos) const {
  const Street& s = streets_[street_index(pos.street)];
  if (!(pos.offset >= 0.0) || !(pos.offset <= s.length)) {
    throw ConfigError("position offset " + std::to_string(pos.offset) +
                      " outside street " + std::to_string(pos.street) + " of length " +
                      std::to_string(s.length));
  }
}

namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line_no,
                             const std::string& msg) {
  throw ConfigError(source + ":" + std::to_string(line_no) + ": " + msg);
}

}  // namespace

StreetMap parse_map(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    parse_fail(source_name, 1, "empty map file");
  }
  ++line_no;
  std::istringstream header(line);
  std::string magic, version;
  std::size_t n_terminals = 0, n_streets = 0;
  if (!(header >> magic >> version >> n_terminals >> n_streets) ||
      magic != "meshcloak-map" || version != "v1") {
    parse_fail(source_name, line_no, "bad header, expected 'meshcloak-map v1 <n> <m>'");
  }

  std::vector<Terminal> terminals;
  terminals.reserve(n_terminals);
  for (std::size_t i = 0; i < n_terminals; ++i) {
    if (!std::getline(in, line)) {
      parse_fail(source_name, line_no + 1, "unexpected end of file in terminal block");
    }
    ++line_no;
    std::istringstream row(line);
    std::string tag;
    Terminal t;
    if (!(row >> tag >> t.id >> t.x >> t.y) || tag != "N") {
      parse_fail(source_name, line_no, "malformed terminal line");
    }
    terminals.push_back(t);
  }

  std::vector<Street> streets;
  streets.reserve(n_streets);
  for (std::size_t i = 0; i < n_streets; ++i) {
    if (!std::getline(in, line)) {
      parse_fail(source_name, line_no + 1, "unexpected end of file in street block");
    }
    ++line_no;
    std::istringstream row(line);
    std::string tag;
    Street s;
    int oneway = 0;
    if (!(row >> tag >> s.id >> s.from >> s.to >> s.length >> oneway) || tag != "E" ||
        (oneway != 0 && oneway != 1)) {
      parse_fail(source_name, line_no, "malformed street line");
    }
    s.oneway = oneway == 1;
    streets.push_back(s);
  }

  return StreetMap(std::move(terminals), std::move(streets));
}

StreetMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open map file: " + path);
  }
  return parse_map(in, path);
}

void serialize_map(const StreetMap& map, std::ostream& out) {
  out.precision(17);
  out << "meshcloak-map v1 " << map.terminal_count() << ' ' << map.street_count() << '\n';
  for (const Terminal& t : map.terminals()) {
    out << "N " << t.id << ' ' << t.x << ' ' << t.y << '\n';
  }
  for (const Street& s : map.streets()) {
    out << "E " << s.id << ' ' << s.from << ' ' << s.to << ' ' << s.length << ' '
        << (s.oneway ? 1 : 0) << '\n';
  }
}

void save_map(const StreetMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write map file: " + path);
  }
  serialize_map(map, out);
  if (!out) {
    throw EngineError("write failed: " + path);
  }
}

double point_segment_distance(const StreetMap& map, std::int32_t street_idx, double x,
                              double y, double& offset_out) {
  const Street& s = map.street_at(street_idx);
  const Terminal& a = map.terminal_at(map.terminal_index(s.from));
  const Terminal& b = map.terminal_at(map.terminal_index(s.to));
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double seg_len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (seg_len2 > 0.0) {
    t = ((x - a.x) * vx + (y - a.y) * vy) / seg_len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double px = a.x + vx * t;
  const double py = a.y + vy * t;
  // Offsets are along the declared length, not the drawn segment.
  offset_out = t * s.length;
  return euclid(x, y, px, py);
}

MapPosition snap_to_street(const StreetMap& map, double x, double y, double max_snap) {
  if (!(max_snap > 0.0)) {
    throw ConfigError("snap_to_street: max_snap must be positive");
  }
  double best_dist = std::numeric_limits<double>::infinity();
  MapPosition best;
  StreetId best_id = 0;
  for (std::size_t i = 0; i < map.street_count(); ++i) {
    double offset = 0.0;
    const double d = point_segment_distance(map, static_cast<std::int32_t>(i), x, y, offset);
    const StreetId id = map.street_at(static_cast<std::int32_t>(i)).id;
    if (d < best_dist || (d == best_dist && best.street >= 0 && id < best_id)) {
      best_dist = d;
      best = MapPosition{id, offset};
      best_id = id;
    }
  }
  if (!(best_dist <= max_snap)) {
    throw ConfigError("unsnappable location (" + std::to_string(x) + ", " +
                      std::to_string(y) + "): nearest street is " +
                      std::to_string(best_dist) + " m away, max_snap " +
                      std::to_string(max_snap));
  }
  return best;
}

double offset_distance_to_terminal(const StreetMap& map, const MapPosition& pos,
                                   StreetEnd which) {
  const Street& s = map.street_by_id(pos.street);
  return which == StreetEnd::from ? pos.offset : s.length - pos.offset;
}

}  // namespace meshcloak
