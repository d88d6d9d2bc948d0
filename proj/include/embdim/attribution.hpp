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
#include <span>
#include <string>
#include <vector>

#include "embdim/evaluate.hpp"
#include "embdim/task.hpp"

namespace embdim {

// Effect of removing a single dimension.
struct AttributionRecord {
  std::size_t dim = 0;
  double score_without = 0.0;
  double delta = 0.0;  // score_without - full score
};

struct Attribution {
  std::string task;
  double full_score = 0.0;
  std::vector<AttributionRecord> records;  // records[d].dim == d
};

// Evaluates the task once per dimension with that single dimension removed
// (not zeroed). Dimensions run in parallel; record d always lands in slot d.
Attribution LeaveOneOut(const Task& task, const EvalOptions& options = {});

// Averages several same-D attributions dimension by dimension (scores, deltas
// and full score alike). Task name becomes "mean".
Attribution AverageAttributions(std::span<const Attribution> attributions);

enum class Verdict { kDegrading, kImproving, kNeutral };
const char* VerdictName(Verdict verdict) noexcept;

// delta > eps: removing the dimension helps, so the dimension is degrading.
// delta < -eps: improving. Otherwise neutral.
struct DimensionVerdicts {
  double eps = 0.0;
  std::vector<Verdict> by_dim;
  std::vector<std::size_t> degrading;
  std::vector<std::size_t> improving;
  std::vector<std::size_t> neutral;
};

// Records must cover every dimension [0, D) exactly once.
DimensionVerdicts ClassifyDimensions(std::span<const AttributionRecord> records,
                                     double eps = 0.0);

struct OutlierDegrading {
  double mean = 0.0;  // of score_without over all dimensions
  double std = 0.0;   // population
  std::vector<std::size_t> dims;          // ODD
  std::vector<std::size_t> outlier_overlap;  // ODD intersected with the given outlier dims
};

// Degrading dimensions whose score_without is at least mean + 3 std of all
// score_without values. Empty when std is 0.
OutlierDegrading FindOutlierDegrading(std::span<const AttributionRecord> records,
                                      const DimensionVerdicts& verdicts,
                                      std::span<const std::size_t> outlier_dims = {});

struct SharedDegradingHistogram {
  std::size_t dims = 0;
  std::size_t n_datasets = 0;
  // ratios[m - 1]: fraction of dimensions flagged degrading in exactly m datasets.
  std::vector<double> ratios;
  std::vector<std::size_t> counts;
};

SharedDegradingHistogram SharedDegrading(std::span<const DimensionVerdicts> per_dataset);

enum class GuidedSet { kDegrading, kImproving };

struct CurvePoint {
  double fraction = 0.0;
  std::size_t n_removed = 0;
  double score = 0.0;
  double relative = 0.0;
};

// Orders the chosen set by |delta| descending (ties by dimension index) and,
// for each fraction f, removes the first round(f * D) dimensions of that order.
// Fractions asking for more dimensions than the set holds are skipped, so the
// curve ends where the set runs out.
std::vector<std::size_t> GuidedOrder(std::span<const AttributionRecord> records,
                                     const DimensionVerdicts& verdicts, GuidedSet which);

std::vector<CurvePoint> GuidedRemovalCurve(const Task& task,
                                           std::span<const AttributionRecord> records,
                                           const DimensionVerdicts& verdicts, GuidedSet which,
                                           std::span<const double> fractions,
                                           const EvalOptions& options = {});

}  // namespace embdim
