#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "meshcloak/distance.hpp"
#include "meshcloak/error.hpp"
#include "meshcloak/rng.hpp"
#include "meshcloak/street_map.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace meshcloak;
using namespace testsupport;

namespace {

// Square ring traversable only counter-clockwise: 0 -> 1 -> 2 -> 3 -> 0,
// four streets of 100 m each.
StreetMap square_oneway_ring() {
  std::vector<Terminal> terminals{
      {0, 0, 0}, {1, 100, 0}, {2, 100, 100}, {3, 0, 100}};
  std::vector<Street> streets{{0, 0, 1, 100, true},
                              {1, 1, 2, 100, true},
                              {2, 2, 3, 100, true},
                              {3, 3, 0, 100, true}};
  return StreetMap(terminals, streets);
}

}  // namespace

TEST_CASE("two terminals joined by one street") {
  std::vector<Terminal> terminals{{0, 0, 0}, {1, 100, 0}};

  SUBCASE("two-way gives both directions") {
    StreetMap map(terminals, {{0, 0, 1, 100, false}});
    BoundedDistanceMatrix m = map_distance_matrix(map, 150.0);
    CHECK(m.entry_count() == 2);
    CHECK(m.terminal_distance(0, 1) == doctest::Approx(100.0));
    CHECK(m.terminal_distance(1, 0) == doctest::Approx(100.0));
  }
  SUBCASE("one-way keeps only the forward entry") {
    StreetMap map(terminals, {{0, 0, 1, 100, true}});
    BoundedDistanceMatrix m = map_distance_matrix(map, 150.0);
    CHECK(m.entry_count() == 1);
    CHECK(m.terminal_distance(0, 1) == doctest::Approx(100.0));
    CHECK_FALSE(m.terminal_distance(1, 0).has_value());
  }
}

TEST_CASE("a terminal is at distance zero from itself") {
  StreetMap map = unit_square_map();
  BoundedDistanceMatrix m = map_distance_matrix(map, 10.0);
  for (std::int32_t i = 0; i < 4; ++i)
    CHECK(m.terminal_distance(i, i) == doctest::Approx(0.0));
}

TEST_CASE("matrix rows agree with an unbounded reference within the bound") {
  Rng rng(301);
  for (int trial = 0; trial < 4; ++trial) {
    StreetMap map = random_map(rng, 30, 50);
    const double dc_max = 500.0;
    BoundedDistanceMatrix m = map_distance_matrix(map, dc_max);
    for (std::int32_t s = 0; s < static_cast<std::int32_t>(map.terminal_count());
         ++s) {
      std::vector<double> ref = full_dijkstra(map, s);
      for (std::int32_t t = 0;
           t < static_cast<std::int32_t>(map.terminal_count()); ++t) {
        auto got = m.terminal_distance(s, t);
        if (ref[t] <= dc_max) {
          REQUIRE(got.has_value());
          CHECK(*got == doctest::Approx(ref[t]).epsilon(1e-9));
        } else if (got.has_value()) {
          CHECK(*got >= ref[t] - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("point distance on a shared two-way street is the offset gap") {
  StreetMap map = unit_square_map();
  BoundedDistanceMatrix m = map_distance_matrix(map, 500.0);
  MapPosition a{0, 20.0};
  MapPosition b{0, 80.0};
  CHECK(point_distance(a, b, m, map) == doctest::Approx(60.0));
  CHECK(point_distance(b, a, m, map) == doctest::Approx(60.0));
  CHECK(point_distance(a, a, m, map) == doctest::Approx(0.0));
}

TEST_CASE("one-way ring forces the long way around") {
  StreetMap map = square_oneway_ring();
  BoundedDistanceMatrix m = map_distance_matrix(map, 400.0);
  MapPosition a{0, 80.0};
  MapPosition b{0, 20.0};
  // Backwards on the hosting street means a full lap minus the gap.
  CHECK(point_distance(a, b, m, map) == doctest::Approx(340.0));
  CHECK(point_distance(b, a, m, map) == doctest::Approx(60.0));

  auto oracle_ab = virtual_node_distance(map, a, b);
  auto oracle_ba = virtual_node_distance(map, b, a);
  REQUIRE(oracle_ab.has_value());
  REQUIRE(oracle_ba.has_value());
  CHECK(*oracle_ab == doctest::Approx(340.0));
  CHECK(*oracle_ba == doctest::Approx(60.0));
}

TEST_CASE("mid-edge points on the unit square match the reference") {
  StreetMap map = unit_square_map();
  BoundedDistanceMatrix m = map_distance_matrix(map, 500.0);
  MapPosition a{0, 50.0};
  MapPosition b{2, 50.0};
  auto got = point_distance(a, b, m, map);
  auto ref = virtual_node_distance(map, a, b);
  REQUIRE(got.has_value());
  REQUIRE(ref.has_value());
  CHECK(*got == doctest::Approx(*ref).epsilon(1e-9));
  CHECK(*got == doctest::Approx(200.0));
}

TEST_CASE("point distance equals the split-street reference when in range") {
  Rng rng(302);
  for (int trial = 0; trial < 4; ++trial) {
    StreetMap map = random_map(rng, 15, 40);
    // Generous bound: everything reachable is in range.
    BoundedDistanceMatrix m = map_distance_matrix(map, 1e7);
    for (int i = 0; i < 40; ++i) {
      MapPosition a = random_position(map, rng);
      MapPosition b = random_position(map, rng);
      auto got = point_distance(a, b, m, map);
      auto ref = virtual_node_distance(map, a, b);
      CHECK(got.has_value() == ref.has_value());
      if (got && ref) CHECK(*got == doctest::Approx(*ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("a bounded matrix never underestimates point distances") {
  Rng rng(303);
  StreetMap map = random_map(rng, 25, 50);
  const double dc_max = 300.0;
  BoundedDistanceMatrix m = map_distance_matrix(map, dc_max);
  int verified_exact = 0;
  for (int i = 0; i < 200; ++i) {
    MapPosition a = random_position(map, rng);
    MapPosition b = random_position(map, rng);
    auto ref = virtual_node_distance(map, a, b);
    auto got = point_distance(a, b, m, map);
    if (ref && *ref <= dc_max) {
      REQUIRE(got.has_value());
      CHECK(*got == doctest::Approx(*ref).epsilon(1e-9));
      ++verified_exact;
    } else if (got.has_value()) {
      REQUIRE(ref.has_value());
      CHECK(*got >= *ref - 1e-9);
    }
  }
  CHECK(verified_exact > 0);
}

TEST_CASE("positions at a terminal behave exactly like the terminal") {
  StreetMap maps[] = {square_oneway_ring(), unit_square_oneway_map(),
                      oneway_ring_map()};
  for (const StreetMap& map : maps) {
    BoundedDistanceMatrix m = map_distance_matrix(map, 1e6);
    for (const Street& sa : map.streets()) {
      for (const Street& sb : map.streets()) {
        MapPosition a{sa.id, 0.0};
        MapPosition b{sb.id, 0.0};
        auto got = point_distance(a, b, m, map);
        auto entry = m.terminal_distance(map.terminal_index(sa.from),
                                         map.terminal_index(sb.from));
        CHECK(got.has_value() == entry.has_value());
        if (got && entry) CHECK(*got == doctest::Approx(*entry).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("matrix save/load round-trip") {
  Rng rng(304);
  StreetMap map = random_map(rng, 20, 40);
  BoundedDistanceMatrix m = map_distance_matrix(map, 400.0);
  std::string path = "matrix_roundtrip.bin";
  save_matrix(m, map, path);

  BoundedDistanceMatrix back = load_matrix(map, path, 400.0);
  CHECK(back.entry_count() == m.entry_count());
  for (std::int32_t s = 0; s < static_cast<std::int32_t>(map.terminal_count());
       ++s)
    for (std::int32_t t = 0;
         t < static_cast<std::int32_t>(map.terminal_count()); ++t) {
      auto x = m.terminal_distance(s, t);
      auto y = back.terminal_distance(s, t);
      CHECK(x.has_value() == y.has_value());
      if (x && y) CHECK(*x == *y);
    }

  CHECK_THROWS_WITH_AS(load_matrix(map, path, 500.0),
                       doctest::Contains("dc_max"), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("corrupt matrix input is rejected") {
  StreetMap map = unit_square_map();
  std::string path = "matrix_corrupt.bin";
  {
    std::ofstream out(path);
    out << "meshcloak-mat v1 100 0\n";
  }
  CHECK_THROWS_AS(load_matrix(map, path, 100.0), ConfigError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_matrix(map, "no_such_matrix.bin", 100.0), ConfigError);
}

TEST_CASE("thread count does not change the result") {
  Rng rng(305);
  StreetMap map = random_map(rng, 40, 60);
  BoundedDistanceMatrix one = map_distance_matrix(map, 450.0, 1);
  BoundedDistanceMatrix four = map_distance_matrix(map, 450.0, 4);
  REQUIRE(one.entry_count() == four.entry_count());
  for (std::int32_t s = 0; s < static_cast<std::int32_t>(map.terminal_count());
       ++s) {
    auto a = one.row(s);
    auto b = four.row(s);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].target == b[i].target);
      CHECK(a[i].dist == b[i].dist);
    }
  }
}

TEST_CASE("two-way maps give a symmetric matrix") {
  Rng rng(306);
  // random_map mixes one-way streets in; rebuild with all streets two-way.
  StreetMap base = random_map(rng, 20, 40);
  std::vector<Street> streets(base.streets().begin(), base.streets().end());
  for (Street& s : streets) s.oneway = false;
  StreetMap map(
      std::vector<Terminal>(base.terminals().begin(), base.terminals().end()),
      streets);
  BoundedDistanceMatrix m = map_distance_matrix(map, 500.0);
  for (std::int32_t s = 0; s < static_cast<std::int32_t>(map.terminal_count());
       ++s)
    for (const auto& e : m.row(s)) {
      auto back = m.terminal_distance(e.target, s);
      REQUIRE(back.has_value());
      CHECK(*back == doctest::Approx(e.dist).epsilon(1e-9));
    }
}

TEST_CASE("sampled triangle inequality on matrix entries") {
  Rng rng(307);
  StreetMap map = random_map(rng, 30, 50);
  BoundedDistanceMatrix m = map_distance_matrix(map, 1e7);
  auto idx = rng.stream("triangle");
  const auto n = static_cast<std::int64_t>(map.terminal_count());
  for (int i = 0; i < 300; ++i) {
    auto a = static_cast<std::int32_t>(idx.uniform_u64(n));
    auto b = static_cast<std::int32_t>(idx.uniform_u64(n));
    auto c = static_cast<std::int32_t>(idx.uniform_u64(n));
    auto ab = m.terminal_distance(a, b);
    auto bc = m.terminal_distance(b, c);
    auto ac = m.terminal_distance(a, c);
    if (ab && bc) {
      REQUIRE(ac.has_value());
      CHECK(*ac <= *ab + *bc + 1e-9);
    }
  }
}
