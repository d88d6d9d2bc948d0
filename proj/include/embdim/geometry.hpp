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
#include <span>
#include <string>
#include <vector>

#include "embdim/evaluate.hpp"
#include "embdim/matrix.hpp"
#include "embdim/task.hpp"

namespace embdim {

inline constexpr std::size_t kUniformLossMaxPoints = 20000;
inline constexpr double kUniformLossTemperature = 2.0;

struct UniformLossResult {
  double value = 0.0;
  std::size_t n_points = 0;  // rows used after subsampling
};

// log of the mean of exp(-t * ||x_i - x_j||^2) over unordered pairs i < j of
// L2-normalized rows (normalized here unless already flagged), t = 2. With
// more than `max_points` rows a seeded subsample of that size is used.
UniformLossResult UniformLoss(const EmbeddingMatrix& matrix, std::uint64_t seed = 0,
                              std::size_t max_points = kUniformLossMaxPoints);

// Isotropy score in (0, 1]: variances along the principal axes are compared
// with the all-equal (isotropic) profile.
//   s      = covariance eigenvalues (variance per principal axis)
//   s_hat  = sqrt(D) * s / ||s||
//   defect = ||s_hat - 1|| / sqrt(2 (D - sqrt(D)))
//   phi    = (D - defect^2 (D - sqrt(D))) / D
//   score  = (D * phi - 1) / (D - 1)
// Needs N >= 2, D >= 2 and non-zero covariance.
double IsoScore(const EmbeddingMatrix& matrix);

struct CorrelationResult {
  double mean_abs = 0.0;
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;  // pairs touching a zero-variance dimension
  std::size_t zero_variance_dims = 0;
};

// Mean |Pearson r| over unordered dimension pairs; pairs with a zero-variance
// dimension are skipped and counted. Needs N >= 3, D >= 2.
CorrelationResult MeanAbsCorrelation(const EmbeddingMatrix& matrix);

struct GeometryReport {
  double uniform_loss = 0.0;
  double isoscore = 0.0;
  double mean_abs_corr = 0.0;
  std::size_t n_points = 0;
  std::size_t dims = 0;
  std::size_t uniform_loss_points = 0;
  std::size_t corr_pairs_skipped = 0;
};

GeometryReport ComputeGeometry(const EmbeddingMatrix& matrix, std::uint64_t seed = 0);

struct OutlierReport {
  std::vector<double> mean_embedding;
  double mean = 0.0;  // mean of the mean-embedding's components
  double std = 0.0;   // population std of those components
  std::vector<std::size_t> outliers;
  std::size_t n_rows = 0;
  std::string note;
};

// Pools every row, averages them into one embedding v, and flags components
// with |v_i - mean(v)| > 3 * std(v).
OutlierReport FindOutlierDimensions(std::span<const EmbeddingMatrix> query_sets);

struct ControlTrial {
  std::size_t trial = 0;
  std::vector<std::size_t> removed;
  std::string removed_hash;
  std::vector<double> task_scores;
  double score = 0.0;  // mean over tasks
};

struct OutlierTrialReport {
  std::vector<std::size_t> outliers;
  std::vector<std::string> tasks;
  std::vector<double> full_scores;
  std::vector<double> outlier_removed_scores;
  double full_score = 0.0;             // mean over tasks
  double outlier_removed_score = 0.0;  // mean over tasks
  std::vector<ControlTrial> trials;
  double control_mean = 0.0;
  double control_std = 0.0;  // population std over trials
};

// Compares removing the outlier dimensions against `trials` random removals of
// the same number of non-outlier dimensions (trial t draws from
// SplitMix64::ForStream(seed, t)).
OutlierTrialReport OutlierControlTrial(std::span<const Task> tasks,
                                       std::span<const std::size_t> outliers,
                                       std::size_t trials, std::uint64_t seed,
                                       const EvalOptions& options = {});

// 64-bit FNV-1a over the indices (8 little-endian bytes each), hex encoded.
std::string HashIndexSet(std::span<const std::size_t> indices);

}  // namespace embdim
