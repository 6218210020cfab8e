#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace fedx {

// Counter-based 64-bit generator (SplitMix64, reference constants).
// All randomness in the simulator flows through explicitly threaded
// instances of this type; there is no global RNG state, so every run is
// a pure function of its seeds and results are identical across
// platforms with IEEE-754 doubles.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Standard normal via Box-Muller (cosine branch; two uniforms per draw).
  double normal() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Unbiased integer in [0, n) via 128-bit multiply-shift.
  uint64_t next_below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

// The SplitMix64 output scrambler applied as a standalone hash.
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic seed derivation. Nesting derive_seed builds independent,
// documented streams: derive_seed(seed, purpose, index), etc.
inline uint64_t derive_seed(uint64_t seed, uint64_t tag) {
  return mix64(seed + 0x9E3779B97F4A7C15ULL * (tag + 1));
}

inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

// Stream purposes used across the simulator (kept in one place so streams
// never collide).
namespace seed_stream {
constexpr uint64_t kInit = 1;      // parameter initialization, per layer
constexpr uint64_t kClient = 2;    // per (round, client) local training
constexpr uint64_t kMask = 3;      // random-baseline mask draws, per round
constexpr uint64_t kData = 4;      // synthetic data generation
constexpr uint64_t kSplit = 5;     // dataset splits / partitioning
constexpr uint64_t kRef = 6;       // reference-set draws
}  // namespace seed_stream

}  // namespace fedx
