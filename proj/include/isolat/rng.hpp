#pragma once

// Deterministic random number generation.
//
// All randomized computations in this library draw from xoshiro256** streams
// seeded through the splitmix64 finalizer, so results are reproducible from a
// single 64-bit master seed on any platform. Independent substreams are derived
// as substream_seed(master, i); nested derivation (trial -> step) is allowed.
// The exact algorithms are part of the output contract and are documented in
// the README.

#include <cstdint>
#include <cmath>

namespace isolat::rng {

// splitmix64 finalizer (Steele, Lea, Flood 2014). Bijective mixing of 64 bits.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed of the i-th substream of a master seed. Streams for distinct i are
// decorrelated by the double application of the finalizer.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t i) {
  return mix64(mix64(master) + 0x9E3779B97F4A7C15ULL * i);
}

// xoshiro256** 1.0 (Blackman, Vigna 2018), state initialized with four
// consecutive splitmix64 outputs.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& word : s_) {
      z += 0x9E3779B97F4A7C15ULL;
      std::uint64_t w = z;
      w = (w ^ (w >> 30)) * 0xBF58476D1CE4E5B9ULL;
      w = (w ^ (w >> 27)) * 0x94D049BB133111EBULL;
      word = w ^ (w >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 significant bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe as a logarithm argument.
  double uniform01_open_low() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via the Box-Muller transform. Two uniforms per draw; no
  // cached spare, so interleaving with other draws stays reproducible.
  double normal() {
    const double u1 = uniform01_open_low();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace isolat::rng
