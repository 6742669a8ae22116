// Copyright 2026 The FairLens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded randomness with a fully specified algorithm.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard <random> distributions are implementation-defined,
// so every draw used by fairlens is derived here from raw 64-bit outputs:
//
//   - Uniform01:    top 53 bits scaled by 2^-53, range [0, 1).
//   - UniformIndex: rejection sampling on the top bits, unbiased.
//   - Normal:       Box-Muller on two Uniform01 draws.
//   - Shuffle:      Fisher-Yates, walking i from n-1 down to 1 and swapping
//                   with UniformIndex(i + 1).
//
// Integer-only paths (UniformIndex, Shuffle) are bit-reproducible on every
// platform. Normal goes through libm (log, cos), which is reproducible for a
// given toolchain.
//
// Independent streams (one per oracle trial) are derived from a base seed and
// a counter with SplitMix64, so trials can be evaluated in any order.

#ifndef FAIRLENS_RANDOM_HPP_
#define FAIRLENS_RANDOM_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace fairlens {

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for stream `counter` of `stream_id` under `base_seed`.
inline std::uint64_t DeriveSeed(std::uint64_t base_seed, std::uint64_t stream_id,
                                std::uint64_t counter) {
  return SplitMix64(SplitMix64(base_seed ^ SplitMix64(stream_id)) + counter);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n) {
    if (n <= 1) return 0;
    // Smallest all-ones mask covering n - 1.
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    while (true) {
      const std::uint64_t x = engine_() & mask;
      if (x < n) return x;
    }
  }

  // Uniform integer in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    UniformIndex(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double Normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 1 - U keeps the log argument in (0, 1].
    const double u1 = 1.0 - Uniform01();
    const double u2 = Uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  bool Bernoulli(double p) { return Uniform01() < p; }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(UniformIndex(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Permutation of [0, n) drawn by Fisher-Yates from a fresh Rng(seed).
inline std::vector<std::size_t> SeededPermutation(std::size_t n,
                                                  std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.Shuffle(perm);
  return perm;
}

}  // namespace fairlens

#endif  // FAIRLENS_RANDOM_HPP_
