#ifndef MESHCLOAK_RNG_HPP
#define MESHCLOAK_RNG_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "meshcloak/error.hpp"

namespace meshcloak {

// Deterministic splitmix64 generator with named sub-streams, so every
// randomized component draws from an isolated stream derived from one seed.
// Distribution helpers are hand-rolled: the standard library's distribution
// output is implementation-defined and would break byte-for-byte replay.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : base_(seed), state_(seed) {}

  Rng stream(std::string_view name) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (char c : name) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return Rng(mix(base_ ^ h));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  double next_double() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  std::uint64_t uniform_u64(std::uint64_t n) {  // [0, n)
    if (n == 0) throw ConfigError("rng: empty range");
    std::uint64_t threshold = (0ull - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
    if (lo > hi) throw ConfigError("rng: inverted range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());
    return lo + static_cast<std::int64_t>(uniform_u64(span));
  }

  double uniform_double(double lo, double hi) {  // [lo, hi)
    return lo + (hi - lo) * next_double();
  }

  std::size_t pick_weighted(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    if (!(total > 0)) throw ConfigError("rng: non-positive weight total");
    double r = uniform_double(0, total);
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (r < acc) return i;
    }
    return weights.size() - 1;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::uint64_t state_;
};

}  // namespace meshcloak

#endif  // MESHCLOAK_RNG_HPP
