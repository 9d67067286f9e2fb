#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace stable_euler {

using Rng = std::mt19937_64;

// Stream families. Noise and time-randomisation draws never share a stream so
// that randomised and left-point schemes see identical noise.
enum class StreamKind : std::uint64_t { noise = 0x6e6f697365ULL, time = 0x74696d65ULL, aux = 0x617578ULL };

// splitmix64 finaliser
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-style derivation: the stream for (seed, kind, index) depends on
// nothing else, so results do not depend on how indices are spread over workers.
inline Rng make_stream(std::uint64_t seed, StreamKind kind, std::uint64_t index) {
  std::uint64_t key = mix64(seed);
  key = mix64(key ^ static_cast<std::uint64_t>(kind));
  key = mix64(key ^ index);
  return Rng{key};
}

// Uniform on the open interval (0, 1); one engine call.
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Exp(1); one engine call.
inline double exponential1(Rng& rng) { return -std::log(uniform01(rng)); }

// Standard normal by Box-Muller; two engine calls, second variate discarded.
inline double std_normal(Rng& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace stable_euler
