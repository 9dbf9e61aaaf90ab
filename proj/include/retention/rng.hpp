#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace retention {

/// SplitMix64 finalizer (Steele/Lea/Vigna, public domain).
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for the k-th Monte Carlo sample: the k-th SplitMix64 output of the
/// stream starting at `seed`. Pure function of (seed, k), so samples can be
/// drawn in any order or on any thread with identical results.
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t k) {
  return splitmix64_mix(seed + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
/// Pinned here (instead of std::uniform_real_distribution, whose algorithm is
/// implementation-defined) so simulation streams are reproducible.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n) by rejection sampling; exactly unbiased.
inline int uniform_index(std::mt19937_64& rng, int n) {
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % un + 1) % un;
  for (;;) {
    const std::uint64_t x = rng();
    if (rem == 0 || x <= std::numeric_limits<std::uint64_t>::max() - rem) {
      return static_cast<int>(x % un);
    }
  }
}

}  // namespace retention
