#include <cmath>
#include <cstdio>
#include <sstream>

#include "doctest.h"
#include "meshcloak/error.hpp"
#include "meshcloak/rng.hpp"
#include "meshcloak/street_map.hpp"
#include "support/fixtures.hpp"

using namespace meshcloak;
using namespace testsupport;

namespace {

std::size_t total_arcs(const StreetMap& map) {
  std::size_t arcs = 0;
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(map.terminal_count()); ++i)
    arcs += map.out_arcs(i).size();
  return arcs;
}

std::string square_file(bool oneway_first) {
  std::ostringstream out;
  out << "meshcloak-map v1 4 4\n";
  out << "N 0 0 0\nN 1 100 0\nN 2 100 100\nN 3 0 100\n";
  out << "E 0 0 1 100 " << (oneway_first ? 1 : 0) << "\n";
  out << "E 1 1 2 100 0\nE 2 2 3 100 0\nE 3 3 0 100 0\n";
  return out.str();
}

}  // namespace

TEST_CASE("two-way unit square expands to eight arcs") {
  std::istringstream in(square_file(false));
  StreetMap map = parse_map(in, "square");
  CHECK(map.terminal_count() == 4);
  CHECK(map.street_count() == 4);
  CHECK(total_arcs(map) == 8);
}

TEST_CASE("a one-way street contributes a single arc") {
  std::istringstream in(square_file(true));
  StreetMap map = parse_map(in, "square");
  CHECK(total_arcs(map) == 7);
  // The surviving arc points from->to.
  bool found = false;
  for (const Arc& arc : map.out_arcs(map.terminal_index(0)))
    if (map.street_at(arc.street).id == 0) {
      found = true;
      CHECK(map.terminal_at(arc.head).id == 1);
    }
  CHECK(found);
  for (const Arc& arc : map.out_arcs(map.terminal_index(1)))
    CHECK(map.street_at(arc.street).id != 0);
}

TEST_CASE("serialize then parse reproduces the map") {
  Rng rng(99);
  StreetMap map = random_map(rng, 20, 60);
  std::ostringstream out;
  serialize_map(map, out);
  std::istringstream in(out.str());
  StreetMap again = parse_map(in, "copy");

  REQUIRE(again.terminal_count() == map.terminal_count());
  REQUIRE(again.street_count() == map.street_count());
  for (std::size_t i = 0; i < map.terminal_count(); ++i) {
    const Terminal& a = map.terminals()[i];
    const Terminal& b = again.terminals()[i];
    CHECK(a.id == b.id);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
  }
  for (std::size_t i = 0; i < map.street_count(); ++i) {
    const Street& a = map.streets()[i];
    const Street& b = again.streets()[i];
    CHECK(a.id == b.id);
    CHECK(a.from == b.from);
    CHECK(a.to == b.to);
    CHECK(a.length == b.length);
    CHECK(a.oneway == b.oneway);
  }
}

TEST_CASE("save and load round-trip through a file") {
  StreetMap map = unit_square_map();
  std::string path = "unit_square_roundtrip.map";
  save_map(map, path);
  StreetMap again = load_map(path);
  CHECK(again.terminal_count() == 4);
  CHECK(again.street_count() == 4);
  CHECK(total_arcs(again) == 8);
  std::remove(path.c_str());
}

TEST_CASE("loading a missing file fails") {
  CHECK_THROWS_AS(load_map("no_such_file.map"), ConfigError);
}

TEST_CASE("parse rejects malformed input") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_map(in, "bad");
  };

  SUBCASE("bad header") {
    CHECK_THROWS_AS(parse("roadmap v1 1 0\nN 0 0 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("meshcloak-map v2 1 0\nN 0 0 0\n"), ConfigError);
  }
  SUBCASE("truncated terminal list") {
    CHECK_THROWS_AS(parse("meshcloak-map v1 2 0\nN 0 0 0\n"), ConfigError);
  }
  SUBCASE("dangling street endpoint") {
    CHECK_THROWS_AS(
        parse("meshcloak-map v1 2 1\nN 0 0 0\nN 1 100 0\nE 0 0 7 100 0\n"),
        ConfigError);
  }
  SUBCASE("non-positive length") {
    CHECK_THROWS_AS(
        parse("meshcloak-map v1 2 1\nN 0 0 0\nN 1 100 0\nE 0 0 1 0 0\n"),
        ConfigError);
  }
  SUBCASE("length below the straight-line bound") {
    CHECK_THROWS_AS(
        parse("meshcloak-map v1 2 1\nN 0 0 0\nN 1 100 0\nE 0 0 1 99 0\n"),
        ConfigError);
  }
  SUBCASE("duplicate terminal id") {
    CHECK_THROWS_AS(parse("meshcloak-map v1 2 0\nN 0 0 0\nN 0 1 1\n"),
                    ConfigError);
  }
  SUBCASE("duplicate street id") {
    CHECK_THROWS_AS(
        parse("meshcloak-map v1 2 2\nN 0 0 0\nN 1 100 0\nE 0 0 1 100 0\n"
              "E 0 1 0 100 0\n"),
        ConfigError);
  }
  SUBCASE("self-loop street") {
    CHECK_THROWS_AS(
        parse("meshcloak-map v1 2 1\nN 0 0 0\nN 1 100 0\nE 0 0 0 5 0\n"),
        ConfigError);
  }
}

TEST_CASE("length equal to the straight line is accepted") {
  std::istringstream in(
      "meshcloak-map v1 2 1\nN 0 0 0\nN 1 100 0\nE 0 0 1 100 0\n");
  StreetMap map = parse_map(in, "exact");
  CHECK(map.street_count() == 1);
}

TEST_CASE("snapping a point on a street interior returns the projection") {
  StreetMap map = unit_square_map();
  MapPosition pos = snap_to_street(map, 37.5, 0.0, 50.0);
  CHECK(pos.street == 0);
  CHECK(pos.offset == doctest::Approx(37.5).epsilon(1e-12));
}

TEST_CASE("snap ties break toward the lowest street id") {
  StreetMap map = unit_square_map();
  // (1, 1) is 1 m from street 0 (bottom) and 1 m from street 3 (left).
  MapPosition pos = snap_to_street(map, 1.0, 1.0, 50.0);
  CHECK(pos.street == 0);
}

TEST_CASE("points beyond max_snap are unsnappable") {
  StreetMap map = unit_square_map();
  CHECK_THROWS_WITH_AS(snap_to_street(map, 600.0, 600.0, 50.0),
                       doctest::Contains("unsnappable"), ConfigError);
}

TEST_CASE("snapping an interpolated position recovers it") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    StreetMap map = random_map(rng, 10, 40);
    for (int i = 0; i < 40; ++i) {
      MapPosition pos = random_position(map, rng);
      double x, y;
      map.position_xy(pos, x, y);
      MapPosition back = snap_to_street(map, x, y, 50.0);
      double bx, by;
      map.position_xy(back, bx, by);
      CHECK(std::hypot(bx - x, by - y) <= 1e-6);
      if (back.street == pos.street)
        CHECK(std::abs(back.offset - pos.offset) <= 1e-6);
    }
  }
}

TEST_CASE("offset distance to either terminal") {
  StreetMap map = unit_square_map();
  MapPosition pos{0, 30.0};
  CHECK(offset_distance_to_terminal(map, pos, StreetEnd::from) == 30.0);
  CHECK(offset_distance_to_terminal(map, pos, StreetEnd::to) == 70.0);
  MapPosition at_terminal{0, 0.0};
  CHECK(offset_distance_to_terminal(map, at_terminal, StreetEnd::from) == 0.0);

  Rng rng(11);
  StreetMap rmap = random_map(rng, 10, 30);
  for (int i = 0; i < 50; ++i) {
    MapPosition p = random_position(rmap, rng);
    double sum = offset_distance_to_terminal(rmap, p, StreetEnd::from) +
                 offset_distance_to_terminal(rmap, p, StreetEnd::to);
    CHECK(sum == doctest::Approx(rmap.street_by_id(p.street).length)
                     .epsilon(1e-12));
  }
}

TEST_CASE("position interpolation and validation") {
  StreetMap map = unit_square_map();
  double x, y;
  map.position_xy({0, 25.0}, x, y);
  CHECK(x == doctest::Approx(25.0));
  CHECK(y == doctest::Approx(0.0));
  map.position_xy({1, 100.0}, x, y);
  CHECK(x == doctest::Approx(100.0));
  CHECK(y == doctest::Approx(100.0));

  CHECK_NOTHROW(map.validate_position({0, 0.0}));
  CHECK_NOTHROW(map.validate_position({0, 100.0}));
  CHECK_THROWS_AS(map.validate_position({0, -0.5}), ConfigError);
  CHECK_THROWS_AS(map.validate_position({0, 100.5}), ConfigError);
  CHECK_THROWS_AS(map.validate_position({42, 1.0}), ConfigError);
}

TEST_CASE("constructor validation mirrors the parser") {
  std::vector<Terminal> terminals{{0, 0, 0}, {1, 100, 0}};
  SUBCASE("non-finite coordinate") {
    std::vector<Terminal> bad{{0, 0, 0}, {1, std::nan(""), 0}};
    CHECK_THROWS_AS(StreetMap(bad, {}), ConfigError);
  }
  SUBCASE("length below euclidean distance") {
    std::vector<Street> bad{{0, 0, 1, 50.0, false}};
    CHECK_THROWS_AS(StreetMap(terminals, bad), ConfigError);
  }
  SUBCASE("ok at the 1e-6 tolerance") {
    std::vector<Street> ok{{0, 0, 1, 100.0 - 5e-7, false}};
    CHECK_NOTHROW(StreetMap(terminals, ok));
  }
}
