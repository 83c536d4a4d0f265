#pragma once

#include <cstdint>
#include <random>

namespace uvplan {

// All randomness flows through std::mt19937_64 seeded from the scenario/CLI
// seed. Draw helpers avoid std::*_distribution so that generated streams are
// identical across standard-library implementations.

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

// Box-Muller; draws two uniforms per call.
inline double gaussian(std::mt19937_64& rng, double mean = 0.0, double stddev = 1.0) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace uvplan
