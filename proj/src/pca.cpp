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

#include "embdim/pca.hpp"

#include <cmath>

#include "embdim/error.hpp"
#include "embdim/kernels.hpp"
#include "embdim/parallel.hpp"
#include "linalg.hpp"

namespace embdim {

PcaModel FitPca(const EmbeddingMatrix& train, std::size_t target_dim) {
  if (target_dim == 0 || target_dim > train.dims()) {
    Fail(ErrorKind::kUsage, "PCA target dimension must lie in [1, " +
                                std::to_string(train.dims()) + "], got " +
                                std::to_string(target_dim));
  }
  if (train.rows() <= target_dim) {
    Fail(ErrorKind::kDegenerate, "PCA needs more training rows (" + std::to_string(train.rows()) +
                                     ") than target dimensions (" + std::to_string(target_dim) +
                                     ")");
  }
  const std::size_t dims = train.dims();
  const detail::Covariance cov = detail::SampleCovariance(train);
  const detail::SymmetricEigen eig = detail::DecomposeSymmetric(cov.values, dims);

  PcaModel model;
  model.dims = dims;
  model.target_dim = target_dim;
  model.mean = cov.mean;
  model.components.assign(eig.vectors.begin(),
                          eig.vectors.begin() + static_cast<std::ptrdiff_t>(target_dim * dims));
  model.explained_variance.assign(eig.values.begin(),
                                  eig.values.begin() + static_cast<std::ptrdiff_t>(target_dim));
  for (double v : eig.values) model.total_variance += v;

  for (std::size_t k = 0; k < target_dim; ++k) {
    double* row = model.components.data() + k * dims;
    std::size_t pivot = 0;
    for (std::size_t j = 1; j < dims; ++j) {
      if (std::abs(row[j]) > std::abs(row[pivot])) pivot = j;
    }
    if (row[pivot] < 0.0) {
      for (std::size_t j = 0; j < dims; ++j) row[j] = -row[j];
    }
  }

  const double top = eig.values.empty() ? 0.0 : eig.values.front();
  const double tol = top * 1e-12 * static_cast<double>(dims);
  model.effective_dim = 0;
  for (std::size_t k = 0; k < target_dim; ++k) {
    if (model.explained_variance[k] > tol) ++model.effective_dim;
  }
  if (model.effective_dim < target_dim) {
    model.warnings.push_back("covariance rank " + std::to_string(model.effective_dim) +
                             " is below the requested " + std::to_string(target_dim) +
                             " components; trailing components carry no variance");
  }
  return model;
}

EmbeddingMatrix PcaProject(const PcaModel& model, const EmbeddingMatrix& matrix) {
  if (matrix.dims() != model.dims) {
    Fail(ErrorKind::kDimension, "PCA model expects D=" + std::to_string(model.dims) +
                                    " but the matrix has D=" + std::to_string(matrix.dims()));
  }
  const std::size_t dims = model.dims;
  const std::size_t out_dims = model.target_dim;
  std::vector<double> out(matrix.rows() * out_dims);
  ParallelFor(matrix.rows(), [&](std::size_t i) {
    std::vector<double> centered(matrix.row(i).begin(), matrix.row(i).end());
    kernels::Axpy(-1.0, model.mean.data(), centered.data(), dims);
    for (std::size_t k = 0; k < out_dims; ++k) {
      out[i * out_dims + k] = kernels::Dot(centered.data(), model.component(k), dims);
    }
  });
  return {matrix.rows(), out_dims, std::move(out), matrix.ids(), false};
}

Task ProjectTask(const Task& task, const PcaModel& model) {
  if (const auto* r = std::get_if<RetrievalTask>(&task)) {
    return RetrievalTask{r->name, PcaProject(model, r->queries), PcaProject(model, r->documents),
                         r->qrels};
  }
  const auto& c = std::get<ClassificationTask>(task);
  ClassificationTask out = c;
  out.train = PcaProject(model, c.train);
  out.test = PcaProject(model, c.test);
  return out;
}

}  // namespace embdim
