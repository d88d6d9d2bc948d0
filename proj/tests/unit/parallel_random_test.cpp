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

#include <atomic>
#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "embdim/parallel.hpp"
#include "embdim/random.hpp"
#include "embdim/stats.hpp"

namespace embdim {
namespace {

// Reference outputs of the documented generator (published SplitMix64 values
// and an independent implementation of the stream/shuffle recipe).
TEST(SplitMix64, GoldenValues) {
  EXPECT_EQ(SplitMix64(0).Next(), 0xE220A8397B1DCDAFULL);
  SplitMix64 rng(12345);
  EXPECT_EQ(rng.Next(), 0x22118258A9D111A0ULL);
  EXPECT_EQ(rng.Next(), 0x346EDCE5F713F8EDULL);
  EXPECT_EQ(rng.Next(), 0x1E9A57BC80E6721DULL);
  auto s = SplitMix64::ForStream(7, 0);
  EXPECT_EQ(SampleWithoutReplacement(8, 4, s), (std::vector<std::size_t>{0, 1, 5, 6}));
  auto t = SplitMix64::ForStream(2024, 3);
  EXPECT_EQ(SampleWithoutReplacement(16, 4, t), (std::vector<std::size_t>{0, 1, 10, 14}));
}

TEST(SplitMix64, RangesAndMoments) {
  SplitMix64 rng(1);
  std::vector<double> u;
  std::vector<double> g;
  for (int i = 0; i < 200000; ++i) {
    const double x = rng.Uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    u.push_back(x);
    g.push_back(rng.Gaussian());
    ASSERT_LT(rng.Below(7), 7u);
  }
  EXPECT_NEAR(Mean(u), 0.5, 0.005);
  EXPECT_NEAR(Mean(g), 0.0, 0.01);
  EXPECT_NEAR(PopulationStd(g), 1.0, 0.01);
  EXPECT_EQ(rng.Below(1), 0u);
}

TEST(SampleWithoutReplacement, DistinctSortedInRange) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.Below(50);
    const std::size_t c = rng.Below(n + 1);
    const auto s = SampleWithoutReplacement(n, c, rng);
    ASSERT_EQ(s.size(), c);
    for (std::size_t i = 0; i < s.size(); ++i) {
      ASSERT_LT(s[i], n);
      if (i > 0) ASSERT_LT(s[i - 1], s[i]);
    }
  }
}

TEST(Stats, MeanAndPopulationStd) {
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(Mean(v), 2.5);
  EXPECT_DOUBLE_EQ(PopulationStd(v), std::sqrt(1.25));
  EXPECT_EQ(Mean(std::vector<double>{}), 0.0);
  EXPECT_EQ(PopulationStd(std::vector<double>{3.0}), 0.0);
}

class ParallelTest : public ::testing::Test {
 protected:
  void SetUp() override { saved_ = WorkerCount(); }
  void TearDown() override { SetWorkerCount(saved_); }
  std::size_t saved_ = 1;
};

TEST_F(ParallelTest, VisitsEveryIndexOnce) {
  for (std::size_t workers : {1u, 3u, 8u}) {
    SetWorkerCount(workers);
    std::vector<std::atomic<int>> hits(1000);
    ParallelFor(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) ASSERT_EQ(h.load(), 1);
  }
  SetWorkerCount(0);
  EXPECT_EQ(WorkerCount(), 1u);
}

TEST_F(ParallelTest, RethrowsLowestFailingIndex) {
  SetWorkerCount(4);
  try {
    ParallelFor(100, [](std::size_t i) {
      if (i == 17 || i == 60 || i == 99) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}

TEST_F(ParallelTest, NestedCallsComplete) {
  SetWorkerCount(4);
  std::vector<std::atomic<int>> hits(20 * 20);
  ParallelFor(20, [&](std::size_t i) {
    ParallelFor(20, [&](std::size_t j) { hits[i * 20 + j].fetch_add(1); });
  });
  for (auto& h : hits) ASSERT_EQ(h.load(), 1);
}

}  // namespace
}  // namespace embdim
