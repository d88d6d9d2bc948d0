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
#include <vector>

#include "embdim/matrix.hpp"

namespace embdim::detail {

struct Covariance {
  std::size_t dims = 0;
  std::vector<double> mean;    // dims
  std::vector<double> values;  // dims x dims, row-major, divisor N - 1
};

Covariance SampleCovariance(const EmbeddingMatrix& matrix);

struct SymmetricEigen {
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // row k is the unit eigenvector of values[k]
};

// Self-adjoint eigendecomposition; negative round-off eigenvalues clamp to 0.
SymmetricEigen DecomposeSymmetric(const std::vector<double>& matrix, std::size_t dims);

}  // namespace embdim::detail
