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

#include "linalg.hpp"

#include <algorithm>

#include <Eigen/Dense>

#include "embdim/error.hpp"

namespace embdim::detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Covariance SampleCovariance(const EmbeddingMatrix& matrix) {
  if (matrix.rows() < 2) {
    Fail(ErrorKind::kDegenerate, "covariance needs at least two rows");
  }
  const auto n = static_cast<Eigen::Index>(matrix.rows());
  const auto d = static_cast<Eigen::Index>(matrix.dims());
  const Eigen::Map<const RowMatrix> x(matrix.data().data(), n, d);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const RowMatrix centered = x.rowwise() - mean;
  RowMatrix cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

  Covariance out;
  out.dims = matrix.dims();
  out.mean.assign(mean.data(), mean.data() + d);
  out.values.assign(cov.data(), cov.data() + d * d);
  return out;
}

SymmetricEigen DecomposeSymmetric(const std::vector<double>& matrix, std::size_t dims) {
  const auto d = static_cast<Eigen::Index>(dims);
  const Eigen::Map<const RowMatrix> a(matrix.data(), d, d);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    Fail(ErrorKind::kDegenerate, "eigendecomposition did not converge");
  }
  // Eigen returns ascending eigenvalues with eigenvectors as columns.
  SymmetricEigen out;
  out.values.resize(dims);
  out.vectors.resize(dims * dims);
  for (std::size_t k = 0; k < dims; ++k) {
    const auto src = static_cast<Eigen::Index>(dims - 1 - k);
    out.values[k] = std::max(0.0, solver.eigenvalues()(src));
    for (std::size_t j = 0; j < dims; ++j) {
      out.vectors[k * dims + j] = solver.eigenvectors()(static_cast<Eigen::Index>(j), src);
    }
  }
  return out;
}

}  // namespace embdim::detail
