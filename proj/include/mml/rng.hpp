#pragma once

#include <cmath>
#include <cstdint>

namespace mml::rng {

// Counter-based 64-bit generator (SplitMix64 output function applied to a
// keyed counter).  State is (key, counter); jumping to any position is O(1)
// and disjoint streams are derived by hashing (seed, stream) together, so
// parallel chains never share state.  Deterministic across platforms: only
// integer ops and IEEE doubles.
struct Counter {
  std::uint64_t key = 0;
  std::uint64_t ctr = 0;

  static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Stream `stream` of master seed `seed`; stream 0 is the main chain.
  static Counter make(std::uint64_t seed, std::uint64_t stream = 0) {
    Counter r;
    r.key = mix(seed + golden * (stream + 1));
    r.ctr = 0;
    return r;
  }

  std::uint64_t next_u64() { return mix(key + golden * ++ctr); }

  // Uniform on (0,1]: never returns 0, so log() is safe.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (pairless form; one trig call per variate
  // is irrelevant at desk scale and keeps the state trivially serializable).
  double next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }
};

} // namespace mml::rng
