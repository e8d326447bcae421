// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rgdtomo {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives an independent substream seed from (base, stream, index).
// Every consumer of randomness gets its own derived seed, so the order in
// which substreams are processed never changes their output.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  std::uint64_t h = mix64(base ^ 0xA5A5A5A5A5A5A5A5ull);
  h = mix64(h ^ mix64(stream));
  h = mix64(h ^ mix64(index));
  return h;
}

// Stream tags for derive_seed. Keep values stable: artifacts on disk depend
// on them.
namespace streams {
inline constexpr std::uint64_t kEnsemble = 1;
inline constexpr std::uint64_t kMeasurement = 2;
inline constexpr std::uint64_t kState = 3;
inline constexpr std::uint64_t kProbe = 4;
inline constexpr std::uint64_t kTrial = 5;
}  // namespace streams

// mt19937_64 with hand-rolled samplers. std::*_distribution output is
// implementation-defined, which would break byte-identical artifacts across
// standard libraries; these samplers are pinned.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), rejection sampled, n >= 1.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal via Box-Muller (cache-free variant).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rgdtomo
