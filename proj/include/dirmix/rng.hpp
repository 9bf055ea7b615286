#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace dirmix {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from a master seed and a salt
/// (chain index, scan index, ...). splitmix64 mixing.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  std::uint64_t z = master + (salt + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Gamma(shape, rate) variate.
double draw_gamma(Rng& rng, double shape, double rate);

/// Exponential(rate) variate.
double draw_exponential(Rng& rng, double rate);

/// Uniform(0,1) variate.
inline double draw_uniform(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Standard normal variate.
inline double draw_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

/// Index in [0, k) drawn uniformly.
inline int draw_uniform_int(Rng& rng, int k) {
  return std::uniform_int_distribution<int>(0, k - 1)(rng);
}

/// Index drawn from the given probabilities (assumed normalized).
int draw_categorical(Rng& rng, std::span<const double> probs);

}  // namespace dirmix
