#include "support/fixtures.hpp"

#include "meshcloak/synthetic_map.hpp"

namespace testsupport {

using namespace meshcloak;

StreetMap unit_square_map() {
  std::vector<Terminal> terminals{
      {0, 0, 0}, {1, 100, 0}, {2, 100, 100}, {3, 0, 100}};
  std::vector<Street> streets{{0, 0, 1, 100, false},
                              {1, 1, 2, 100, false},
                              {2, 2, 3, 100, false},
                              {3, 3, 0, 100, false}};
  return StreetMap(std::move(terminals), std::move(streets));
}

StreetMap unit_square_oneway_map() {
  std::vector<Terminal> terminals{
      {0, 0, 0}, {1, 100, 0}, {2, 100, 100}, {3, 0, 100}};
  std::vector<Street> streets{{0, 0, 1, 100, true},
                              {1, 1, 2, 100, false},
                              {2, 2, 3, 100, false},
                              {3, 3, 0, 100, false}};
  return StreetMap(std::move(terminals), std::move(streets));
}

StreetMap oneway_ring_map() {
  std::vector<Terminal> terminals{{0, 0, 0}, {1, 100, 0}, {2, 50, 80}};
  std::vector<Street> streets{{0, 0, 1, 100, true},
                              {1, 1, 2, 120, true},
                              {2, 2, 0, 120, true}};
  return StreetMap(std::move(terminals), std::move(streets));
}

StreetMap random_map(Rng& rng, std::size_t min_t, std::size_t max_t) {
  std::size_t n = static_cast<std::size_t>(
      rng.uniform_int(static_cast<std::int64_t>(min_t),
                      static_cast<std::int64_t>(max_t)));
  std::size_t extra = rng.uniform_u64(n);
  double width = rng.uniform_double(500, 3000);
  double height = rng.uniform_double(500, 3000);
  double oneway = rng.uniform_double(0, 0.5);
  return synthetic_map(n, n - 1 + extra, width, height, oneway,
                       rng.next_u64());
}

MapPosition random_position(const StreetMap& map, Rng& rng) {
  auto idx = static_cast<std::int32_t>(rng.uniform_u64(map.street_count()));
  const Street& s = map.street_at(idx);
  return {s.id, rng.uniform_double(0, s.length)};
}

Query make_query(QueryId id, MapPosition pos, double dc, int k,
                 std::int64_t t, std::int64_t dt) {
  Query q;
  q.id = id;
  q.user = id;
  q.k = k;
  q.t = t;
  q.pos = pos;
  q.dt = dt;
  q.dc = dc;
  return q;
}

}  // namespace testsupport
