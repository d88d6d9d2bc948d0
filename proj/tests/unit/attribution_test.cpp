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

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "embdim/attribution.hpp"
#include "embdim/error.hpp"
#include "embdim/random.hpp"
#include "embdim/synthetic.hpp"
#include "embdim/truncation.hpp"
#include "test_support.hpp"

namespace embdim {
namespace {

std::vector<AttributionRecord> Records(const std::vector<double>& deltas, double full = 0.5) {
  std::vector<AttributionRecord> out;
  for (std::size_t d = 0; d < deltas.size(); ++d) out.push_back({d, full + deltas[d], deltas[d]});
  return out;
}

DimensionVerdicts VerdictsWithDegrading(std::size_t dims, const std::vector<std::size_t>& degrading) {
  std::vector<double> deltas(dims, -0.01);
  for (std::size_t d : degrading) deltas[d] = 0.01;
  return ClassifyDimensions(Records(deltas));
}

TEST(LeaveOneOut, CompleteExactAndZeroColumnNeutral) {
  RetrievalTask task = synthetic::MakeRedundantSignalTask(3, {16, 4, 12, 3, 0.5, 0.3});
  auto zero = [](const EmbeddingMatrix& m) {
    std::vector<double> data = m.data();
    for (std::size_t i = 0; i < m.rows(); ++i) data[i * m.dims() + 9] = 0.0;
    return EmbeddingMatrix(m.rows(), m.dims(), data, m.ids());
  };
  task.queries = zero(task.queries);
  task.documents = zero(task.documents);
  const Task t = task;
  const Attribution a = LeaveOneOut(t);
  ASSERT_EQ(a.records.size(), 16u);
  EXPECT_EQ(a.full_score, Evaluate(t).score);
  for (std::size_t d = 0; d < 16; ++d) {
    EXPECT_EQ(a.records[d].dim, d);
    const DimensionMask mask(16, {d});
    EXPECT_EQ(Evaluate(t, &mask).score, a.records[d].score_without);
    EXPECT_EQ(a.records[d].delta, a.records[d].score_without - a.full_score);
  }
  EXPECT_EQ(a.records[9].delta, 0.0);
}

TEST(LeaveOneOut, WorksForClassification) {
  const Task t = synthetic::MakeBlobClassificationTask(1);
  const Attribution a = LeaveOneOut(t);
  ASSERT_EQ(a.records.size(), 10u);
  // Dimension 0 carries all the signal.
  EXPECT_LT(a.records[0].delta, 0.0);
}

TEST(ClassifyDimensions, Definitions) {
  const auto v = ClassifyDimensions(Records({0.01, -0.01, 0.0}));
  EXPECT_EQ(v.degrading, std::vector<std::size_t>{0});
  EXPECT_EQ(v.improving, std::vector<std::size_t>{1});
  EXPECT_EQ(v.neutral, std::vector<std::size_t>{2});
  const auto all_zero = ClassifyDimensions(Records({0, 0, 0, 0}));
  EXPECT_EQ(all_zero.neutral.size(), 4u);
  const auto tolerant = ClassifyDimensions(Records({0.01, -0.01, 0.03}), 0.02);
  EXPECT_EQ(tolerant.degrading, std::vector<std::size_t>{2});
  EXPECT_EQ(tolerant.neutral, (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(ClassifyDimensions(Records({0.1}), -1.0), Error);
}

TEST(ClassifyDimensions, PartitionCoversEveryDimension) {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> deltas(1 + rng.Below(40));
    for (double& d : deltas) d = static_cast<double>(rng.Below(5)) * 0.01 - 0.02;
    const auto v = ClassifyDimensions(Records(deltas), 0.005 * rng.Below(3));
    std::vector<std::size_t> all = v.degrading;
    all.insert(all.end(), v.improving.begin(), v.improving.end());
    all.insert(all.end(), v.neutral.begin(), v.neutral.end());
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), deltas.size());
    for (std::size_t d = 0; d < all.size(); ++d) ASSERT_EQ(all[d], d);
  }
}

TEST(FindOutlierDegrading, Cases) {
  const auto flat = Records(std::vector<double>(20, 0.0));
  EXPECT_TRUE(FindOutlierDegrading(flat, ClassifyDimensions(flat)).dims.empty());

  std::vector<double> deltas(40, 0.0);
  for (std::size_t d = 0; d < 40; ++d) deltas[d] = (d % 3 == 0 ? 0.001 : -0.001);
  deltas[12] = 0.2;
  const auto records = Records(deltas);
  const auto verdicts = ClassifyDimensions(records);
  const std::vector<std::size_t> outliers = {12, 30};
  const auto odd = FindOutlierDegrading(records, verdicts, outliers);
  EXPECT_EQ(odd.dims, std::vector<std::size_t>{12});
  EXPECT_EQ(odd.outlier_overlap, std::vector<std::size_t>{12});
}

TEST(FindOutlierDegrading, AlwaysSubsetOfDegrading) {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> deltas(30);
    for (double& d : deltas) d = rng.Gaussian() * (rng.Below(10) == 0 ? 5.0 : 0.1);
    const auto records = Records(deltas);
    const auto verdicts = ClassifyDimensions(records);
    for (std::size_t d : FindOutlierDegrading(records, verdicts).dims) {
      EXPECT_TRUE(std::binary_search(verdicts.degrading.begin(), verdicts.degrading.end(), d));
    }
  }
}

TEST(SharedDegrading, CountingCases) {
  const std::vector<DimensionVerdicts> disjoint = {VerdictsWithDegrading(16, {0, 1, 2}),
                                                   VerdictsWithDegrading(16, {3, 4, 5, 6, 7})};
  const auto h = SharedDegrading(disjoint);
  ASSERT_EQ(h.ratios.size(), 2u);
  EXPECT_EQ(h.ratios[0], 0.5);
  EXPECT_EQ(h.ratios[1], 0.0);

  const auto same = VerdictsWithDegrading(8, {1, 3, 5, 7});
  const std::vector<DimensionVerdicts> identical = {same, same, same};
  const auto g = SharedDegrading(identical);
  EXPECT_EQ(g.ratios, (std::vector<double>{0.0, 0.0, 0.5}));
  EXPECT_EQ(g.counts, (std::vector<std::size_t>{0, 0, 4}));
  EXPECT_THROW(SharedDegrading(std::span(identical).first(1)), Error);
}

TEST(SharedDegrading, RatiosSumToFlaggedAnywhere) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dims = 1 + rng.Below(30);
    const std::size_t n = 2 + rng.Below(4);
    std::vector<DimensionVerdicts> sets;
    std::set<std::size_t> anywhere;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> deg;
      for (std::size_t d = 0; d < dims; ++d) {
        if (rng.Below(3) == 0) {
          deg.push_back(d);
          anywhere.insert(d);
        }
      }
      sets.push_back(VerdictsWithDegrading(dims, deg));
    }
    const auto h = SharedDegrading(sets);
    double sum = 0.0;
    for (double r : h.ratios) sum += r;
    EXPECT_NEAR(sum, static_cast<double>(anywhere.size()) / dims, 1e-12);
  }
}

TEST(AverageAttributions, AveragesByDimension) {
  Attribution a{"a", 0.5, Records({0.1, -0.1}, 0.5)};
  Attribution b{"b", 0.7, Records({0.3, 0.1}, 0.7)};
  const std::vector<Attribution> both = {a, b};
  const auto avg = AverageAttributions(both);
  EXPECT_EQ(avg.task, "mean");
  EXPECT_NEAR(avg.full_score, 0.6, 1e-15);
  EXPECT_NEAR(avg.records[0].delta, 0.2, 1e-15);
  EXPECT_NEAR(avg.records[1].delta, 0.0, 1e-15);
}

TEST(GuidedOrder, ByAbsoluteDeltaThenIndex) {
  const auto records = Records({0.02, -0.05, 0.05, 0.01, 0.02});
  const auto v = ClassifyDimensions(records);
  EXPECT_EQ(GuidedOrder(records, v, GuidedSet::kDegrading), (std::vector<std::size_t>{2, 0, 4, 3}));
  EXPECT_EQ(GuidedOrder(records, v, GuidedSet::kImproving), std::vector<std::size_t>{1});
}

class PlantedTest : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(PlantedTest, PlantedDimsDegradeAndGuidedCurvesBehave) {
  const auto planted = synthetic::MakePlantedDegradingTask(GetParam());
  const Task task = planted.task;
  const Attribution a = LeaveOneOut(task);
  const auto v = ClassifyDimensions(a.records);
  for (std::size_t d : planted.planted) EXPECT_GT(a.records[d].delta, 0.0) << "dim " << d;

  const double fractions[] = {0.0, 1.0 / 64, 0.125};
  const auto degrading = GuidedRemovalCurve(task, a.records, v, GuidedSet::kDegrading, fractions);
  ASSERT_GE(degrading.size(), 2u);
  EXPECT_EQ(degrading[0].relative, 1.0);
  const std::size_t top = GuidedOrder(a.records, v, GuidedSet::kDegrading).front();
  EXPECT_EQ(degrading[1].n_removed, 1u);
  EXPECT_EQ(degrading[1].score, a.records[top].score_without);
  if (v.degrading.size() >= 8) {
    ASSERT_EQ(degrading.size(), 3u);
    EXPECT_GE(degrading[2].score, a.full_score);
  }

  const double shared[] = {0.1, 0.25, 0.5};
  const auto improving = GuidedRemovalCurve(task, a.records, v, GuidedSet::kImproving, shared);
  TruncationSpec spec;
  spec.mode = TruncationMode::kRandom;
  spec.runs = 10;
  spec.seed = GetParam();
  const std::vector<Task> tasks = {task};
  const auto random = RunSweep(tasks, spec, shared);
  ASSERT_EQ(improving.size(), 3u);
  for (std::size_t f = 0; f < improving.size(); ++f) {
    EXPECT_LE(improving[f].relative, random.aggregate_mean[f]) << "fraction " << shared[f];
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, PlantedTest, ::testing::Values(0, 1, 2));

TEST(GuidedRemovalCurve, StopsWhenTheSetRunsOut) {
  const auto planted = synthetic::MakePlantedDegradingTask(0);
  const Task task = planted.task;
  const auto records = Records(std::vector<double>(64, -0.01), 0.5);
  auto with_two = records;
  with_two[3].delta = 0.01;
  with_two[9].delta = 0.02;
  const auto v = ClassifyDimensions(with_two);
  const double fractions[] = {0.0, 1.0 / 64, 2.0 / 64, 3.0 / 64};
  const auto curve = GuidedRemovalCurve(task, with_two, v, GuidedSet::kDegrading, fractions);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve[2].n_removed, 2u);
}

}  // namespace
}  // namespace embdim
