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
#include <string>
#include <vector>

#include "embdim/matrix.hpp"
#include "embdim/task.hpp"

namespace embdim {

// Principal components of a training matrix.
//
// components holds target_dim unit rows (row-major, target_dim x dims) ordered
// by non-increasing explained variance. Each row's largest-magnitude entry is
// positive (first such entry on ties), which pins the otherwise arbitrary sign.
struct PcaModel {
  std::size_t dims = 0;
  std::size_t target_dim = 0;
  std::vector<double> mean;
  std::vector<double> components;
  std::vector<double> explained_variance;
  // Numerical rank of the covariance, capped at target_dim.
  std::size_t effective_dim = 0;
  // Sum of all covariance eigenvalues, i.e. total variance of the data.
  double total_variance = 0.0;
  std::vector<std::string> warnings;

  const double* component(std::size_t k) const { return components.data() + k * dims; }
};

// Eigendecomposition of the D x D sample covariance (divisor N - 1).
// Requires rows > target_dim >= 1 and target_dim <= dims. A covariance of
// rank below target_dim is not an error: the trailing components carry zero
// variance and a warning records the reduced effective dimension.
PcaModel FitPca(const EmbeddingMatrix& train, std::size_t target_dim);

// (x - mean) * components^T for every row; ids are preserved.
EmbeddingMatrix PcaProject(const PcaModel& model, const EmbeddingMatrix& matrix);

// Projects every matrix of the task (queries and documents, or train and
// test) with the same model. Qrels and labels are untouched.
Task ProjectTask(const Task& task, const PcaModel& model);

}  // namespace embdim
