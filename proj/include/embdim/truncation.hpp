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
#include "embdim/stats.hpp"
#include "embdim/task.hpp"

namespace embdim {

enum class TruncationMode { kLast, kFirst, kRandom };

const char* TruncationModeName(TruncationMode mode) noexcept;
TruncationMode ParseTruncationMode(const std::string& name);

struct TruncationSpec {
  TruncationMode mode = TruncationMode::kLast;
  double fraction = 0.0;  // used by single-mask helpers; sweeps take a list
  std::size_t runs = 1;   // > 1 only for random mode
  std::uint64_t seed = 0;
  // Random mode draws one mask per run shared by every task unless set.
  bool per_task_masks = false;
};

// Number of removed dimensions: round-half-up(fraction * dims). Rejects
// fractions outside [0, 1) and counts that would remove every dimension.
std::size_t RemovalCount(std::size_t dims, double fraction);

// Removes the first or last RemovalCount(dims, fraction) indices.
DimensionMask MakeContiguousMask(std::size_t dims, double fraction, TruncationMode end);

// Removes RemovalCount(dims, fraction) indices drawn without replacement by a
// partial Fisher-Yates shuffle driven by SplitMix64::ForStream(seed, run_index).
// Identical arguments give identical masks on every platform.
DimensionMask MakeRandomMask(std::size_t dims, double fraction, std::uint64_t seed,
                             std::size_t run_index);

// Mask for one sweep point. In random mode with per-task masks the task index
// is folded into the seed.
DimensionMask MakeMask(const TruncationSpec& spec, std::size_t dims, double fraction,
                       std::size_t run_index, std::size_t task_index = 0);

struct TaskSweep {
  std::string task;
  EvalResult full;
  std::vector<std::vector<EvalResult>> results;  // [fraction][run]
  std::vector<std::vector<double>> relative;     // [fraction][run]
  std::vector<double> mean_relative;             // [fraction]
  std::vector<double> std_relative;              // [fraction], population
};

struct SweepReport {
  TruncationSpec spec;
  std::vector<double> fractions;
  std::vector<TaskSweep> tasks;
  // Per fraction: mean over tasks of each task's mean relative performance,
  // and the population std over runs of the task-averaged relative score.
  std::vector<double> aggregate_mean;
  std::vector<double> aggregate_std;
};

// Evaluates each task's baseline once, then every (fraction, run) mask.
// All tasks must share D. Points run in parallel into a pre-indexed grid.
SweepReport RunSweep(std::span<const Task> tasks, const TruncationSpec& spec,
                     std::span<const double> fractions, const EvalOptions& options = {});

// PCA reduction against random truncation at the same kept dimension.
struct PcaComparisonRow {
  std::string task;
  Metric metric = Metric::kNdcgAt10;
  double full_score = 0.0;
  double pca_score = 0.0;
  double pca_relative = 0.0;
  double random_mean_relative = 0.0;
  double random_std_relative = 0.0;
  std::size_t effective_dim = 0;
};

struct PcaComparison {
  double fraction = 0.0;
  std::size_t dims = 0;
  std::size_t target_dim = 0;  // dims - RemovalCount(dims, fraction)
  std::size_t runs = 0;
  std::vector<PcaComparisonRow> rows;
  double pca_mean_relative = 0.0;     // mean over tasks
  double random_mean_relative = 0.0;  // mean over tasks
  std::vector<std::string> warnings;
};

// Fits PCA on `fit` when given, otherwise per task on its documents
// (retrieval) or training rows (classification), keeps
// dims - RemovalCount(dims, fraction) components and compares with `runs`
// random masks removing the same number of dimensions (seeded as in RunSweep).
PcaComparison ComparePcaToTruncation(std::span<const Task> tasks, double fraction,
                                     std::size_t runs, std::uint64_t seed,
                                     const EmbeddingMatrix* fit = nullptr,
                                     const EvalOptions& options = {});

}  // namespace embdim
