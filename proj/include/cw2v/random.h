// Copyright 2026 The CW2V Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Sampling helpers with a fixed, library-independent mapping from the
// generator's output to values. The <random> distributions are
// implementation-defined, which would make seeded artifacts differ across
// standard libraries.

#ifndef CW2V_RANDOM_H_
#define CW2V_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>

namespace cw2v {

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(SplitMix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 1));
}

// Uniform in [0, 1) with 53 random bits.
inline double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformReal(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform01(rng);
}

inline bool Bernoulli(std::mt19937_64& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return Uniform01(rng) < p;
}

// Uniform in [0, n). Lemire's multiply-shift; the bias for n << 2^64 is
// negligible.
inline std::size_t UniformIndex(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n)) >> 64);
}

// Fisher-Yates over any random-access container.
template <typename Range>
void Shuffle(Range& items, std::mt19937_64& rng) {
  using std::swap;
  for (std::size_t i = items.size(); i > 1; --i) {
    swap(items[i - 1], items[UniformIndex(rng, i)]);
  }
}

}  // namespace cw2v

#endif  // CW2V_RANDOM_H_
