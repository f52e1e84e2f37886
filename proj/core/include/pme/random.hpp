#pragma once

// Seed derivation and variate generation with fixed, documented algorithms so
// that results are bit-identical across platforms and standard libraries.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pme::random {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed: hashes a base seed together with a tuple of counters
/// (sample index, qubit index, trajectory index, ...).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters) {
  std::uint64_t h = splitmix64(base);
  for (auto c : counters) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Standard normal variate by the Marsaglia polar method (one value per
/// call; the second value of each accepted pair is discarded so that each
/// call depends only on the engine state).
double standard_normal(std::mt19937_64& engine);

}  // namespace pme::random
