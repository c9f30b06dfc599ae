// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "emojipred/hash.hpp"

namespace emojipred {

// Deterministic random stream. All randomness in a run flows from a single
// manifest seed through named sub-streams, so that e.g. the shuffle order is
// independent of how many samples the balancer drew. Bounded draws and reals
// are implemented here rather than with std:: distributions, whose output is
// implementation-defined.
class Rng {
 public:
  Rng(uint64_t seed, std::string_view stream_name)
      : engine_(mix(seed, fnv1a(stream_name))) {}

  explicit Rng(uint64_t raw_seed) : engine_(raw_seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
  uint64_t next_below(uint64_t bound) {
    if (bound == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform double in [0, 1) with 53 bits of resolution.
  double next_real() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_real();
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(next_below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  static uint64_t mix(uint64_t seed, uint64_t stream) {
    // splitmix64 finalizer over the combined value
    uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream | 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace emojipred
