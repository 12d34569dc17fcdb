#ifndef RUVSTAR_RNG_HPP
#define RUVSTAR_RNG_HPP

#include <cstdint>
#include <random>

namespace ruvstar {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to spread user seeds and derive independent
// streams for parallel work.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d4a08685ebca6bULL;
  return x ^ (x >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

// Stream `stream` derived from `seed`. Derivation is schedule independent,
// so parallel consumers stay deterministic.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(mix64(mix64(seed) ^ mix64(stream ^ 0x51ed2701a5c5e8d3ULL)));
}

inline double rnorm(Rng& rng) {
  static thread_local std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

inline double runif(Rng& rng) {
  static thread_local std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

// Gamma(shape a, rate b): mean a/b, variance a/b^2.
inline double rgamma_rate(Rng& rng, double shape, double rate) {
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(rng);
}

}  // namespace ruvstar

#endif  // RUVSTAR_RNG_HPP
