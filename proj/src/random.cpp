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

#include "embdim/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace embdim {

SplitMix64 SplitMix64::ForStream(std::uint64_t seed, std::uint64_t stream) noexcept {
  SplitMix64 base(seed);
  return SplitMix64(base.Next() ^ (stream * 0xD1B54A32D192ED03ULL));
}

std::uint64_t SplitMix64::Next() noexcept {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::Below(std::uint64_t bound) noexcept {
  // High 64 bits of the 128-bit product, from 32-bit halves.
  const std::uint64_t x = Next();
  const std::uint64_t x_lo = x & 0xFFFFFFFFULL, x_hi = x >> 32;
  const std::uint64_t b_lo = bound & 0xFFFFFFFFULL, b_hi = bound >> 32;
  const std::uint64_t lo_lo = x_lo * b_lo;
  const std::uint64_t hi_lo = x_hi * b_lo;
  const std::uint64_t lo_hi = x_lo * b_hi;
  const std::uint64_t cross = (lo_lo >> 32) + (hi_lo & 0xFFFFFFFFULL) + lo_hi;
  return x_hi * b_hi + (hi_lo >> 32) + (cross >> 32);
}

double SplitMix64::Uniform() noexcept {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

double SplitMix64::Gaussian() noexcept {
  // 1 - U lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t count,
                                                  SplitMix64& rng) {
  count = std::min(count, n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(count);
  std::sort(perm.begin(), perm.end());
  return perm;
}

}  // namespace embdim
