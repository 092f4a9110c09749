#pragma once

// Seeded pseudo-random stream used by every generator in the project.
//
// State transition is SplitMix64:
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
// uniform()   = (next() >> 11) * 2^-53, in [0, 1)
// uniform(a,b)= a + (b - a) * uniform()
// index(n)    = floor(uniform() * n), in [0, n)
// normal()    = sqrt(-2 ln(1 - u1)) * cos(2 pi u2), u1 then u2 drawn by
//               uniform(); one draw per pair (the sine branch is discarded)
// Any implementation following these rules reproduces the same streams.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace mascope {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace mascope
