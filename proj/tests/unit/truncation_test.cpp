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

#include <gtest/gtest.h>

#include "embdim/error.hpp"
#include "embdim/synthetic.hpp"
#include "embdim/truncation.hpp"

namespace embdim {
namespace {

TEST(RemovalCount, RoundHalfUp) {
  EXPECT_EQ(RemovalCount(1024, 0.9), 922u);
  EXPECT_EQ(RemovalCount(4, 0.5), 2u);
  EXPECT_EQ(RemovalCount(10, 0.25), 3u);  // 2.5 rounds up
  EXPECT_EQ(RemovalCount(64, 0.0), 0u);
  EXPECT_THROW(RemovalCount(4, 1.0), Error);
  EXPECT_THROW(RemovalCount(4, -0.1), Error);
  EXPECT_THROW(RemovalCount(2, 0.9), Error);  // would remove both
}

TEST(ContiguousMask, FirstAndLast) {
  EXPECT_EQ(MakeContiguousMask(4, 0.5, TruncationMode::kLast).removed(),
            (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(MakeContiguousMask(4, 0.5, TruncationMode::kFirst).removed(),
            (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(MakeContiguousMask(1024, 0.9, TruncationMode::kLast).removed().size(), 922u);
}

TEST(RandomMask, ReproducibleAndRunSpecific) {
  EXPECT_EQ(MakeRandomMask(8, 0.5, 7, 0), MakeRandomMask(8, 0.5, 7, 0));
  EXPECT_EQ(MakeRandomMask(8, 0.5, 7, 0).removed(), (std::vector<std::size_t>{0, 1, 5, 6}));
  EXPECT_EQ(MakeRandomMask(8, 0.5, 7, 1).removed(), (std::vector<std::size_t>{1, 2, 3, 7}));
  EXPECT_NE(MakeRandomMask(1024, 0.5, 7, 0), MakeRandomMask(1024, 0.5, 7, 1));
  EXPECT_EQ(MakeRandomMask(1024, 0.5, 7, 0).removed().size(), 512u);
}

TEST(RandomMask, EachIndexRemovedUniformly) {
  std::vector<int> counts(10, 0);
  const int draws = 10000;
  for (int r = 0; r < draws; ++r) {
    const DimensionMask mask = MakeRandomMask(10, 0.3, 99, r);
    for (std::size_t d : mask.removed()) ++counts[d];
  }
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 0.3, 0.02);
}

TEST(MakeMask, SharedAcrossTasksUnlessRequested) {
  TruncationSpec spec;
  spec.mode = TruncationMode::kRandom;
  spec.seed = 3;
  EXPECT_EQ(MakeMask(spec, 64, 0.5, 2, 0), MakeMask(spec, 64, 0.5, 2, 5));
  spec.per_task_masks = true;
  EXPECT_NE(MakeMask(spec, 64, 0.5, 2, 0), MakeMask(spec, 64, 0.5, 2, 5));
}

std::vector<Task> ThreeToyTasks() {
  std::vector<Task> tasks;
  tasks.emplace_back(synthetic::MakePlantedDegradingTask(1).task);
  auto redundant = synthetic::MakeRedundantSignalTask(2, {64, 8, 30, 4, 0.5, 0.3});
  tasks.emplace_back(std::move(redundant));
  synthetic::BlobParams blobs;
  blobs.dims = 64;
  blobs.signal_dims = 3;
  tasks.emplace_back(synthetic::MakeBlobClassificationTask(3, blobs));
  return tasks;
}

TEST(RunSweep, ZeroFractionIsExactlyOne) {
  const auto tasks = ThreeToyTasks();
  for (TruncationMode mode : {TruncationMode::kLast, TruncationMode::kRandom}) {
    TruncationSpec spec;
    spec.mode = mode;
    spec.runs = 4;
    const double fractions[] = {0.0};
    const auto rep = RunSweep(tasks, spec, fractions);
    EXPECT_EQ(rep.aggregate_mean[0], 1.0);
    EXPECT_EQ(rep.aggregate_std[0], 0.0);
    for (const auto& ts : rep.tasks) {
      EXPECT_EQ(ts.mean_relative[0], 1.0);
      EXPECT_EQ(ts.std_relative[0], 0.0);
    }
  }
}

TEST(RunSweep, AggregatesAndGridShape) {
  const auto tasks = ThreeToyTasks();
  TruncationSpec spec;
  spec.mode = TruncationMode::kRandom;
  spec.runs = 5;
  spec.seed = 11;
  const std::vector<double> fractions = {0.0, 0.25, 0.5, 0.75};
  const auto rep = RunSweep(tasks, spec, fractions);
  ASSERT_EQ(rep.tasks.size(), 3u);
  for (std::size_t f = 0; f < fractions.size(); ++f) {
    double mean = 0.0;
    std::vector<double> run_means(5, 0.0);
    for (const auto& ts : rep.tasks) {
      ASSERT_EQ(ts.results[f].size(), 5u);
      mean += ts.mean_relative[f] / 3.0;
      EXPECT_GE(ts.std_relative[f], 0.0);
      for (std::size_t r = 0; r < 5; ++r) {
        EXPECT_EQ(ts.relative[f][r], ts.results[f][r].score / ts.full.score);
        run_means[r] += ts.relative[f][r] / 3.0;
        // Every task in one run sees the same mask.
        if (f > 0) EXPECT_EQ(*ts.results[f][r].mask, *rep.tasks[0].results[f][r].mask);
      }
    }
    EXPECT_NEAR(rep.aggregate_mean[f], mean, 1e-12);
    EXPECT_NEAR(rep.aggregate_std[f], PopulationStd(run_means), 1e-12);
  }
  // Same inputs, same numbers.
  const auto again = RunSweep(tasks, spec, fractions);
  EXPECT_EQ(again.aggregate_mean, rep.aggregate_mean);
  EXPECT_EQ(again.aggregate_std, rep.aggregate_std);
}

TEST(RunSweep, RejectsMixedDimensions) {
  std::vector<Task> tasks;
  tasks.emplace_back(synthetic::MakePlantedDegradingTask(1).task);
  tasks.emplace_back(synthetic::MakeBlobClassificationTask(1));
  const double fractions[] = {0.5};
  try {
    RunSweep(tasks, {}, fractions);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimension);
  }
}

TEST(RunSweep, RedundantSignalSurvivesRandomHalving) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const std::vector<Task> tasks = {synthetic::MakeRedundantSignalTask(seed)};
    TruncationSpec spec;
    spec.mode = TruncationMode::kRandom;
    spec.runs = 10;
    spec.seed = seed;
    const double fractions[] = {0.5};
    EXPECT_GE(RunSweep(tasks, spec, fractions).aggregate_mean[0], 0.95) << "seed " << seed;
  }
}

// Signal lives in dims 0-3, so the curve collapses once contiguous removal
// from the front reaches them; removing the same count from the back keeps it.
TEST(RunSweep, ConcentratedSignalCollapses) {
  const std::vector<Task> tasks = {synthetic::MakeConcentratedSignalTask(0)};
  const std::vector<double> fractions = {0.0, 1.0 / 64, 4.0 / 64, 0.5};
  TruncationSpec first;
  first.mode = TruncationMode::kFirst;
  const auto collapse = RunSweep(tasks, first, fractions);
  EXPECT_LT(collapse.aggregate_mean[2], 0.5);
  EXPECT_LT(collapse.aggregate_mean[3], 0.5);
  TruncationSpec last;
  last.mode = TruncationMode::kLast;
  const auto keep = RunSweep(tasks, last, fractions);
  EXPECT_GE(keep.aggregate_mean[3], 0.9);
}

}  // namespace
}  // namespace embdim
