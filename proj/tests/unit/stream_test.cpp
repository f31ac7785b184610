#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "meshcloak/error.hpp"
#include "meshcloak/stream.hpp"
#include "support/fixtures.hpp"

using namespace meshcloak;
using namespace testsupport;

namespace {

std::vector<QueryRecord> sample_records() {
  std::vector<QueryRecord> recs;
  recs.push_back({0, 7, 12.5, 0.0, 2, 3, 150.0});
  recs.push_back({2, 3, 100.0, 62.25, 4, 5, 0.1 + 0.2});  // non-terminating
  recs.push_back({2, 9, 0.0, 87.5, 3, 4, 333.333});
  return recs;
}

}  // namespace

TEST_CASE("stream CSV round-trips exactly") {
  std::vector<QueryRecord> recs = sample_records();
  std::ostringstream out;
  write_stream_csv(out, recs);

  std::istringstream in(out.str());
  std::vector<QueryRecord> back = read_stream_csv(in, "mem");
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].t == recs[i].t);
    CHECK(back[i].user == recs[i].user);
    CHECK(back[i].x == recs[i].x);  // bit-exact through precision 17
    CHECK(back[i].y == recs[i].y);
    CHECK(back[i].k == recs[i].k);
    CHECK(back[i].dt == recs[i].dt);
    CHECK(back[i].dc == recs[i].dc);
  }
}

TEST_CASE("stream files round-trip on disk") {
  std::string path = "stream_roundtrip.csv";
  save_stream(path, sample_records());
  std::vector<QueryRecord> back = load_stream(path);
  CHECK(back.size() == 3);
  CHECK(back[1].dc == 0.1 + 0.2);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_stream(path), ConfigError);
}

TEST_CASE("header-only streams are empty, not errors") {
  std::istringstream in("t,user,x,y,k,dt,dc\n");
  CHECK(read_stream_csv(in, "mem").empty());
}

TEST_CASE("malformed streams name the offending line") {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_stream_csv(in, "bad.csv");
  };

  SUBCASE("wrong header") {
    CHECK_THROWS_WITH_AS(read("time,user,x,y,k,dt,dc\n"),
                         doctest::Contains("bad.csv:1"), ConfigError);
  }
  SUBCASE("no header at all") {
    CHECK_THROWS_AS(read(""), ConfigError);
  }
  SUBCASE("unsorted timestamps") {
    CHECK_THROWS_WITH_AS(read("t,user,x,y,k,dt,dc\n"
                              "5,0,1,1,2,3,10\n"
                              "4,1,1,1,2,3,10\n"),
                         doctest::Contains("bad.csv:3"), ConfigError);
  }
  SUBCASE("trailing fields") {
    CHECK_THROWS_WITH_AS(read("t,user,x,y,k,dt,dc\n"
                              "5,0,1,1,2,3,10,77\n"),
                         doctest::Contains("trailing"), ConfigError);
  }
  SUBCASE("non-numeric field") {
    CHECK_THROWS_WITH_AS(read("t,user,x,y,k,dt,dc\n"
                              "5,0,east,1,2,3,10\n"),
                         doctest::Contains("malformed"), ConfigError);
  }
  SUBCASE("missing fields") {
    CHECK_THROWS_AS(read("t,user,x,y,k,dt,dc\n5,0,1\n"), ConfigError);
  }
}

TEST_CASE("blank lines and CRLF endings are tolerated") {
  std::istringstream in("t,user,x,y,k,dt,dc\r\n"
                        "1,0,2.5,0,2,3,10\r\n"
                        "\n"
                        "4,1,5,0,2,3,10\n");
  std::vector<QueryRecord> recs = read_stream_csv(in, "mem");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].x == 2.5);
  CHECK(recs[1].t == 4);
}

TEST_CASE("snapping a stream assigns ids in row order") {
  StreetMap map = unit_square_map();
  std::vector<QueryRecord> recs;
  recs.push_back({0, 5, 30.0, 0.5, 2, 3, 120.0});   // near street 0
  recs.push_back({1, 6, 100.5, 40.0, 3, 4, 200.0});  // near street 1
  recs.push_back({3, 7, 60.0, 99.5, 2, 5, 80.0});   // near street 2

  std::vector<Query> queries = snap_stream(map, recs, 2.0);
  REQUIRE(queries.size() == 3);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    CHECK(queries[i].id == static_cast<QueryId>(i));
    CHECK(queries[i].user == recs[i].user);
    CHECK(queries[i].t == recs[i].t);
    CHECK(queries[i].k == recs[i].k);
    CHECK(queries[i].dt == recs[i].dt);
    CHECK(queries[i].dc == recs[i].dc);
  }
  CHECK(queries[0].pos.street == 0);
  CHECK(queries[0].pos.offset == doctest::Approx(30.0));
  CHECK(queries[1].pos.street == 1);
  CHECK(queries[1].pos.offset == doctest::Approx(40.0));
  CHECK(queries[2].pos.street == 2);
  CHECK(queries[2].pos.offset == doctest::Approx(40.0));

  SUBCASE("records beyond max_snap are rejected") {
    recs.push_back({9, 8, 500.0, 500.0, 2, 3, 10.0});
    CHECK_THROWS_WITH_AS(snap_stream(map, recs, 2.0),
                         doctest::Contains("unsnappable"), ConfigError);
  }
}
