#pragma once

#include <cstdint>
#include <random>

namespace leoscale {

// splitmix64 finalizer; used both for seed derivation and for hashing a
// (master seed, stream index) pair into an independent engine seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(stream));
}

// Uniform double in [0, 1). std::uniform_real_distribution is
// implementation-defined, so draws are built from raw engine output to keep
// results reproducible across standard libraries.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection; bound >= 1.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace leoscale
