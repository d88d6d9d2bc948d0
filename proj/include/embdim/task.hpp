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

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "embdim/matrix.hpp"

namespace embdim {

// query id -> doc id -> graded relevance (>= 0)
using Qrels = std::map<std::string, std::map<std::string, int>>;

struct RetrievalTask {
  std::string name;
  EmbeddingMatrix queries;
  EmbeddingMatrix documents;
  Qrels qrels;

  std::size_t dims() const noexcept { return queries.dims(); }
};

struct ClassificationTask {
  std::string name;
  EmbeddingMatrix train;
  std::vector<int> train_labels;
  EmbeddingMatrix test;
  std::vector<int> test_labels;
  // class_names[c] is the original label string of class id c.
  std::vector<std::string> class_names;

  std::size_t dims() const noexcept { return train.dims(); }
  std::size_t n_classes() const noexcept { return class_names.size(); }
};

using Task = std::variant<RetrievalTask, ClassificationTask>;

// Throw on any broken cross-field invariant (dims, id coverage, labels).
void Validate(const RetrievalTask& task);
void Validate(const ClassificationTask& task);

const std::string& TaskName(const Task& task);
std::size_t TaskDims(const Task& task);

enum class Metric { kNdcgAt10, kAccuracy };
const char* MetricName(Metric metric) noexcept;

struct EvalResult {
  std::string task_name;
  Metric metric = Metric::kNdcgAt10;
  double score = 0.0;
  std::optional<DimensionMask> mask;
  // Free-form label of how the mask was produced ("none" when unmasked).
  std::string mask_spec = "none";
};

// trunc.score / full.score. Both results must name the same task and metric;
// a zero baseline is rejected.
double RelativePerformance(const EvalResult& trunc, const EvalResult& full);

}  // namespace embdim
