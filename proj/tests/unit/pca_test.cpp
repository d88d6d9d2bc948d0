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

#include <cmath>

#include <gtest/gtest.h>

#include "embdim/error.hpp"
#include "embdim/pca.hpp"
#include "embdim/synthetic.hpp"
#include "embdim/truncation.hpp"
#include "test_support.hpp"

namespace embdim {
namespace {

using testing::FromRows;
using testing::GaussianMatrix;

TEST(FitPca, AxisAlignedVariances) {
  // Variances in ratio 4:1 along x and y.
  const auto m = FromRows({{2, 1}, {-2, 1}, {2, -1}, {-2, -1}});
  const auto model = FitPca(m, 1);
  EXPECT_NEAR(model.component(0)[0], 1.0, 1e-12);
  EXPECT_NEAR(model.component(0)[1], 0.0, 1e-12);
  EXPECT_NEAR(model.explained_variance[0], 16.0 / 3.0, 1e-12);
  EXPECT_NEAR(model.total_variance, 16.0 / 3.0 + 4.0 / 3.0, 1e-12);
}

TEST(FitPca, SignRuleMakesLargestEntryPositive) {
  const auto m = FromRows({{-3, 0.1}, {3, -0.1}, {-1, 0.2}, {1, -0.2}});
  const auto model = FitPca(m, 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const double* c = model.component(k);
    const double big = std::abs(c[0]) >= std::abs(c[1]) ? c[0] : c[1];
    EXPECT_GT(big, 0.0);
  }
}

TEST(FitPca, PointsOnTheDiagonal) {
  const auto m = FromRows({{-1, -1}, {0, 0}, {1, 1}, {2, 2}});
  const auto model = FitPca(m, 2);
  EXPECT_NEAR(model.component(0)[0], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(model.component(0)[1], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(model.explained_variance[1], 0.0, 1e-12);
  EXPECT_EQ(model.effective_dim, 1u);
  EXPECT_FALSE(model.warnings.empty());
}

TEST(FitPca, Preconditions) {
  const auto m = GaussianMatrix(3, 4, 1);
  EXPECT_THROW(FitPca(m, 0), Error);
  EXPECT_THROW(FitPca(m, 5), Error);
  EXPECT_THROW(FitPca(m, 3), Error);  // rows must exceed target_dim
  EXPECT_NO_THROW(FitPca(m, 2));
}

TEST(FitPca, OrthonormalComponentsAndVarianceBound) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto m = GaussianMatrix(60, 12, seed);
    for (std::size_t target : {1u, 5u, 12u}) {
      const auto model = FitPca(m, target);
      for (std::size_t a = 0; a < target; ++a) {
        for (std::size_t b = 0; b < target; ++b) {
          double dot = 0.0;
          for (std::size_t d = 0; d < 12; ++d) dot += model.component(a)[d] * model.component(b)[d];
          EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-8);
        }
        if (a > 0) EXPECT_LE(model.explained_variance[a], model.explained_variance[a - 1]);
      }
      double explained = 0.0;
      for (double v : model.explained_variance) explained += v;
      // Total data variance computed directly from the columns.
      double total = 0.0;
      for (std::size_t d = 0; d < 12; ++d) {
        double mean = 0.0;
        for (std::size_t i = 0; i < 60; ++i) mean += m.at(i, d) / 60.0;
        for (std::size_t i = 0; i < 60; ++i) total += (m.at(i, d) - mean) * (m.at(i, d) - mean) / 59.0;
      }
      EXPECT_LE(explained, total + 1e-8);
      if (target == 12) EXPECT_NEAR(explained, total, 1e-8);
    }
  }
}

TEST(PcaProject, FullRankPreservesCenteredDistances) {
  const auto m = GaussianMatrix(30, 8, 4);
  const auto model = FitPca(m, 8);
  const auto p = PcaProject(model, m);
  EXPECT_EQ(p.ids(), m.ids());
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t j = i + 1; j < 30; ++j) {
      double a = 0.0, b = 0.0;
      for (std::size_t d = 0; d < 8; ++d) {
        a += (m.at(i, d) - m.at(j, d)) * (m.at(i, d) - m.at(j, d));
        b += (p.at(i, d) - p.at(j, d)) * (p.at(i, d) - p.at(j, d));
      }
      EXPECT_NEAR(std::sqrt(a), std::sqrt(b), 1e-8);
    }
  }
}

TEST(PcaProject, MeanMapsToZeroAndIdentityComponentsCenter) {
  const auto m = GaussianMatrix(20, 3, 6);
  const auto model = FitPca(m, 2);
  const EmbeddingMatrix mean(1, 3, model.mean, {"mean"});
  const EmbeddingMatrix projected = PcaProject(model, mean);
  for (double v : projected.data()) EXPECT_NEAR(v, 0.0, 1e-12);

  PcaModel identity = model;
  identity.target_dim = 3;
  identity.components = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  const auto p = PcaProject(identity, m);
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(p.at(i, d), m.at(i, d) - model.mean[d], 1e-12);
  }
  EXPECT_THROW(PcaProject(model, GaussianMatrix(2, 4, 1)), Error);
}

TEST(ComparePca, RedundantSignalKeepsBothHalvings) {
  const std::vector<Task> tasks = {synthetic::MakeRedundantSignalTask(0)};
  const auto cmp = ComparePcaToTruncation(tasks, 0.5, 10, 0);
  EXPECT_EQ(cmp.target_dim, 64u);
  EXPECT_GE(cmp.rows[0].pca_relative, 0.95);
  EXPECT_GE(cmp.rows[0].random_mean_relative, 0.95);
}

}  // namespace
}  // namespace embdim
