#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

// Counter-based random number generation. Every variate is a pure function
// of (seed, stream, index), so substreams can be drawn in any order, in
// parallel, and reproduce exactly.

namespace blepi::rng {

inline std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t index) {
  std::uint64_t h = mix64(seed ^ 0x5851F42D4C957F2Dull);
  h = mix64(h ^ (stream + 0xD1B54A32D192ED03ull));
  h = mix64(h ^ (index + 0x8CB92BA72F3D8DD7ull));
  return h;
}

// Uniform on the open interval (0,1).
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index) {
  const std::uint64_t h = counter_hash(seed, stream, index);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal variate via Box-Muller; consumes counters 2*index and
// 2*index+1 of the underlying uniform stream.
inline double standard_normal(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t index) {
  const double u1 = uniform01(seed, stream, 2 * index);
  const double u2 = uniform01(seed, stream, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace blepi::rng
