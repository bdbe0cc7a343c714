#pragma once

#include <cstdint>
#include <random>

namespace magbell {

/// splitmix64 scrambler; used to derive independent per-setting streams from
/// one master seed so results do not depend on evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(master_seed) ^ splitmix64(index + 1)));
}

inline double sample_binomial_fraction(std::mt19937_64& rng, long long shots, double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  std::binomial_distribution<long long> dist(shots, p);
  return static_cast<double>(dist(rng)) / static_cast<double>(shots);
}

}  // namespace magbell
