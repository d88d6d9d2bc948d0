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

#include "embdim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "embdim/error.hpp"
#include "embdim/kernels.hpp"
#include "embdim/parallel.hpp"
#include "embdim/random.hpp"
#include "embdim/stats.hpp"
#include "linalg.hpp"

namespace embdim {

UniformLossResult UniformLoss(const EmbeddingMatrix& matrix, std::uint64_t seed,
                              std::size_t max_points) {
  if (matrix.rows() < 2) Fail(ErrorKind::kDegenerate, "uniform loss needs at least two rows");
  if (max_points < 2) Fail(ErrorKind::kUsage, "uniform loss subsample must keep two rows");
  const EmbeddingMatrix normalized =
      matrix.l2_normalized() ? matrix : L2Normalize(matrix);

  std::vector<std::size_t> rows;
  if (normalized.rows() > max_points) {
    SplitMix64 rng(seed);
    rows = SampleWithoutReplacement(normalized.rows(), max_points, rng);
  } else {
    rows.resize(normalized.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  }

  const std::size_t n = rows.size();
  const std::size_t dims = normalized.dims();
  std::vector<double> partial(n, 0.0);
  ParallelFor(n, [&](std::size_t a) {
    const double* x = normalized.row(rows[a]).data();
    double sum = 0.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d2 = kernels::SquaredDistance(x, normalized.row(rows[b]).data(), dims);
      sum += std::exp(-kUniformLossTemperature * d2);
    }
    partial[a] = sum;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return {std::log(total / pairs), n};
}

double IsoScore(const EmbeddingMatrix& matrix) {
  if (matrix.rows() < 2) Fail(ErrorKind::kDegenerate, "IsoScore needs at least two rows");
  if (matrix.dims() < 2) Fail(ErrorKind::kDegenerate, "IsoScore needs at least two dimensions");
  const std::size_t dims = matrix.dims();
  const detail::Covariance cov = detail::SampleCovariance(matrix);
  const detail::SymmetricEigen eig = detail::DecomposeSymmetric(cov.values, dims);

  const double norm = std::sqrt(kernels::Dot(eig.values.data(), eig.values.data(), dims));
  if (norm == 0.0) {
    Fail(ErrorKind::kDegenerate, "IsoScore is undefined for zero covariance (all points identical)");
  }
  const double d = static_cast<double>(dims);
  const double root_d = std::sqrt(d);
  double defect_sq = 0.0;
  for (double v : eig.values) {
    const double diff = root_d * v / norm - 1.0;
    defect_sq += diff * diff;
  }
  const double defect = std::sqrt(defect_sq) / std::sqrt(2.0 * (d - root_d));
  const double phi = (d - defect * defect * (d - root_d)) / d;
  return (d * phi - 1.0) / (d - 1.0);
}

CorrelationResult MeanAbsCorrelation(const EmbeddingMatrix& matrix) {
  if (matrix.rows() < 3) Fail(ErrorKind::kDegenerate, "correlation needs at least three rows");
  if (matrix.dims() < 2) Fail(ErrorKind::kDegenerate, "correlation needs at least two dimensions");
  const std::size_t dims = matrix.dims();
  const detail::Covariance cov = detail::SampleCovariance(matrix);

  // A column counts as constant when its spread is at round-off level
  // relative to its magnitude.
  std::vector<double> max_abs(dims, 0.0);
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    const auto row = matrix.row(i);
    for (std::size_t d = 0; d < dims; ++d) max_abs[d] = std::max(max_abs[d], std::abs(row[d]));
  }
  std::vector<char> constant(dims);
  std::vector<double> sd(dims);
  CorrelationResult result;
  for (std::size_t d = 0; d < dims; ++d) {
    sd[d] = std::sqrt(std::max(0.0, cov.values[d * dims + d]));
    constant[d] = sd[d] <= 1e-12 * max_abs[d] || sd[d] == 0.0 ? 1 : 0;
    if (constant[d]) ++result.zero_variance_dims;
  }

  std::vector<double> row_sums(dims, 0.0);
  std::vector<std::size_t> row_pairs(dims, 0);
  ParallelFor(dims, [&](std::size_t a) {
    if (constant[a]) return;
    for (std::size_t b = a + 1; b < dims; ++b) {
      if (constant[b]) continue;
      const double r = cov.values[a * dims + b] / (sd[a] * sd[b]);
      row_sums[a] += std::min(1.0, std::abs(r));
      ++row_pairs[a];
    }
  });
  double sum = 0.0;
  for (std::size_t d = 0; d < dims; ++d) {
    sum += row_sums[d];
    result.pairs_used += row_pairs[d];
  }
  result.pairs_skipped = dims * (dims - 1) / 2 - result.pairs_used;
  if (result.pairs_used == 0) {
    Fail(ErrorKind::kDegenerate,
         "no dimension pair has non-zero variance on both sides; correlation undefined");
  }
  result.mean_abs = sum / static_cast<double>(result.pairs_used);
  return result;
}

GeometryReport ComputeGeometry(const EmbeddingMatrix& matrix, std::uint64_t seed) {
  GeometryReport report;
  const UniformLossResult uniform = UniformLoss(matrix, seed);
  const CorrelationResult corr = MeanAbsCorrelation(matrix);
  report.uniform_loss = uniform.value;
  report.uniform_loss_points = uniform.n_points;
  report.isoscore = IsoScore(matrix);
  report.mean_abs_corr = corr.mean_abs;
  report.corr_pairs_skipped = corr.pairs_skipped;
  report.n_points = matrix.rows();
  report.dims = matrix.dims();
  return report;
}

OutlierReport FindOutlierDimensions(std::span<const EmbeddingMatrix> query_sets) {
  if (query_sets.empty()) Fail(ErrorKind::kUsage, "outlier detection needs at least one matrix");
  const std::size_t dims = query_sets[0].dims();
  OutlierReport report;
  report.mean_embedding.assign(dims, 0.0);
  for (const auto& m : query_sets) {
    if (m.dims() != dims) {
      Fail(ErrorKind::kDimension, "query sets disagree on dimensionality (" +
                                      std::to_string(dims) + " vs " + std::to_string(m.dims()) +
                                      ")");
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      kernels::Axpy(1.0, m.row(i).data(), report.mean_embedding.data(), dims);
    }
    report.n_rows += m.rows();
  }
  if (report.n_rows == 0) Fail(ErrorKind::kDegenerate, "outlier detection needs at least one row");
  for (double& v : report.mean_embedding) v /= static_cast<double>(report.n_rows);

  report.mean = Mean(report.mean_embedding);
  report.std = PopulationStd(report.mean_embedding);
  if (report.std == 0.0) {
    report.note = "degenerate sigma: the mean embedding is constant, no outliers";
    return report;
  }
  for (std::size_t d = 0; d < dims; ++d) {
    if (std::abs(report.mean_embedding[d] - report.mean) > 3.0 * report.std) {
      report.outliers.push_back(d);
    }
  }
  return report;
}

std::string HashIndexSet(std::span<const std::size_t> indices) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t index : indices) {
    auto v = static_cast<std::uint64_t>(index);
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

OutlierTrialReport OutlierControlTrial(std::span<const Task> tasks,
                                       std::span<const std::size_t> outliers,
                                       std::size_t trials, std::uint64_t seed,
                                       const EvalOptions& options) {
  if (tasks.empty()) Fail(ErrorKind::kUsage, "control trial needs at least one task");
  if (outliers.empty()) {
    Fail(ErrorKind::kUsage, "control trial needs at least one outlier dimension");
  }
  if (trials == 0) Fail(ErrorKind::kUsage, "control trial needs at least one trial");
  const std::size_t dims = TaskDims(tasks[0]);
  for (const auto& task : tasks) {
    if (TaskDims(task) != dims) Fail(ErrorKind::kDimension, "tasks disagree on dimensionality");
  }
  const DimensionMask outlier_mask(dims, {outliers.begin(), outliers.end()});
  const std::size_t k = outlier_mask.removed().size();
  if (dims - k < k) {
    Fail(ErrorKind::kDegenerate, "not enough non-outlier dimensions for an equal-size control");
  }
  const std::vector<std::size_t> pool = outlier_mask.kept();

  OutlierTrialReport report;
  report.outliers = outlier_mask.removed();
  for (const auto& task : tasks) report.tasks.push_back(TaskName(task));

  std::vector<DimensionMask> masks;
  masks.push_back(outlier_mask);
  report.trials.resize(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng = SplitMix64::ForStream(seed, t);
    std::vector<std::size_t> removed;
    for (std::size_t j : SampleWithoutReplacement(pool.size(), k, rng)) removed.push_back(pool[j]);
    report.trials[t].trial = t;
    report.trials[t].removed_hash = HashIndexSet(removed);
    report.trials[t].removed = removed;
    masks.emplace_back(dims, std::move(removed));
  }

  // Grid: [task][0 = full, 1 = outliers removed, 2.. = control trials]
  const std::size_t configs = masks.size() + 1;
  std::vector<double> scores(tasks.size() * configs);
  ParallelFor(scores.size(), [&](std::size_t p) {
    const std::size_t t = p / configs;
    const std::size_t c = p % configs;
    scores[p] = Evaluate(tasks[t], c == 0 ? nullptr : &masks[c - 1], options).score;
  });

  const auto n_tasks = static_cast<double>(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    report.full_scores.push_back(scores[t * configs]);
    report.outlier_removed_scores.push_back(scores[t * configs + 1]);
    report.full_score += scores[t * configs] / n_tasks;
    report.outlier_removed_score += scores[t * configs + 1] / n_tasks;
  }
  std::vector<double> control;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    ControlTrial& ct = report.trials[trial];
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      ct.task_scores.push_back(scores[t * configs + 2 + trial]);
    }
    ct.score = Mean(ct.task_scores);
    control.push_back(ct.score);
  }
  report.control_mean = Mean(control);
  report.control_std = PopulationStd(control);
  return report;
}

}  // namespace embdim
