/*
 * Copyright 2026 The embdim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace embdim {

// SplitMix64 generator. Used instead of <random> engines and distributions so
// that every seeded draw (masks, subsamples, synthetic data) is reproducible
// bit-for-bit across compilers and platforms.
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  // Stream keyed by (seed, stream): the seed is advanced once and its output
  // is xor-ed with stream * 0xD1B54A32D192ED03.
  static SplitMix64 ForStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t Next() noexcept;

  // Uniform integer in [0, bound) by 128-bit multiply-shift; bound >= 1.
  std::uint64_t Below(std::uint64_t bound) noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform() noexcept;

  // Standard normal by the Box-Muller transform (one value per call).
  double Gaussian() noexcept;

 private:
  std::uint64_t state_;
};

// First `count` entries of a partial Fisher-Yates shuffle of [0, n):
//   perm = [0, 1, ..., n-1]
//   for i in [0, count): j = i + rng.Below(n - i); swap(perm[i], perm[j])
// returned sorted ascending.
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t count,
                                                  SplitMix64& rng);

}  // namespace embdim
