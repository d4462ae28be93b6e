#pragma once

#include <cstdint>

namespace themegrain::detail {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so table generation is order-independent and parallelizable.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

// Maps a 64-bit hash to the open interval (0, 1); never returns 0 or 1, so
// the value is safe inside logarithms.
inline double unit_open(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace themegrain::detail
