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

#include "embdim/evaluate.hpp"

#include "embdim/error.hpp"
#include "embdim/parallel.hpp"

namespace embdim {

EvalResult Evaluate(const Task& task, const DimensionMask* mask, const EvalOptions& options) {
  if (mask != nullptr && mask->total_dims() != TaskDims(task)) {
    Fail(ErrorKind::kDimension, "mask covers " + std::to_string(mask->total_dims()) +
                                    " dimensions but task '" + TaskName(task) + "' has " +
                                    std::to_string(TaskDims(task)));
  }
  if (const auto* retrieval = std::get_if<RetrievalTask>(&task)) {
    return EvaluateRetrieval(*retrieval, mask, options.retrieval);
  }
  return EvaluateClassification(std::get<ClassificationTask>(task), mask,
                                options.classification);
}

std::vector<EvalResult> EvaluateAll(std::span<const Task> tasks, const EvalOptions& options) {
  std::vector<EvalResult> results(tasks.size());
  ParallelFor(tasks.size(), [&](std::size_t i) { results[i] = Evaluate(tasks[i], nullptr, options); });
  return results;
}

namespace {

void CheckAligned(std::span<const EvalResult> trunc, std::span<const EvalResult> full) {
  if (trunc.size() != full.size() || full.empty()) {
    Fail(ErrorKind::kUsage, "relative performance needs one truncated result per baseline");
  }
}

}  // namespace

double MeanRelativePerformance(std::span<const EvalResult> trunc,
                               std::span<const EvalResult> full) {
  CheckAligned(trunc, full);
  double sum = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) sum += RelativePerformance(trunc[i], full[i]);
  return sum / static_cast<double>(full.size());
}

double RelativeOfMeans(std::span<const EvalResult> trunc, std::span<const EvalResult> full) {
  CheckAligned(trunc, full);
  double t = 0.0;
  double f = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (trunc[i].task_name != full[i].task_name || trunc[i].metric != full[i].metric) {
      Fail(ErrorKind::kUsage, "relative performance needs results for the same task and metric");
    }
    t += trunc[i].score;
    f += full[i].score;
  }
  if (f <= 0.0) Fail(ErrorKind::kDegenerate, "mean baseline score is 0");
  return t / f;
}

}  // namespace embdim
