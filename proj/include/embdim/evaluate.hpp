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

#include <span>
#include <vector>

#include "embdim/classifier.hpp"
#include "embdim/retrieval.hpp"
#include "embdim/task.hpp"

namespace embdim {

struct EvalOptions {
  RetrievalOptions retrieval;
  ClassificationOptions classification;
};

// nDCG@10 for retrieval tasks, test accuracy for classification tasks.
EvalResult Evaluate(const Task& task, const DimensionMask* mask = nullptr,
                    const EvalOptions& options = {});

// Unmasked baselines, one per task, evaluated in parallel.
std::vector<EvalResult> EvaluateAll(std::span<const Task> tasks, const EvalOptions& options = {});

// Mean over tasks of each task's relative performance (trunc[i] vs full[i]).
double MeanRelativePerformance(std::span<const EvalResult> trunc,
                               std::span<const EvalResult> full);

// Relative performance of the task-averaged scores (mean trunc / mean full).
double RelativeOfMeans(std::span<const EvalResult> trunc, std::span<const EvalResult> full);

}  // namespace embdim
