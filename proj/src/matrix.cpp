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

#include "embdim/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "embdim/error.hpp"
#include "embdim/kernels.hpp"

namespace embdim {

const char* ErrorKindName(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kUsage:
      return "usage error";
    case ErrorKind::kIo:
      return "i/o error";
    case ErrorKind::kFormat:
      return "format error";
    case ErrorKind::kTruncated:
      return "truncated file";
    case ErrorKind::kData:
      return "data error";
    case ErrorKind::kAlignment:
      return "alignment error";
    case ErrorKind::kDimension:
      return "dimension mismatch";
    case ErrorKind::kDegenerate:
      return "degenerate input";
  }
  return "error";
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dims,
                                 std::vector<double> data,
                                 std::vector<std::string> ids, bool l2_normalized)
    : rows_(rows),
      dims_(dims),
      data_(std::move(data)),
      ids_(std::move(ids)),
      l2_normalized_(l2_normalized) {
  if (rows_ == 0 || dims_ == 0) {
    Fail(ErrorKind::kDimension, "embedding matrix must have at least one row and one dimension");
  }
  if (data_.size() != rows_ * dims_) {
    Fail(ErrorKind::kDimension, "embedding payload holds " + std::to_string(data_.size()) +
                                    " values, expected " + std::to_string(rows_ * dims_));
  }
  if (ids_.size() != rows_) {
    Fail(ErrorKind::kAlignment, "got " + std::to_string(ids_.size()) + " ids for " +
                                    std::to_string(rows_) + " rows");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      Fail(ErrorKind::kData, "non-finite value in row '" + ids_[i / dims_] + "', dimension " +
                                 std::to_string(i % dims_));
    }
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(rows_);
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) Fail(ErrorKind::kAlignment, "duplicate row id '" + id + "'");
  }
  if (l2_normalized_) {
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* r = data_.data() + i * dims_;
      const double norm = std::sqrt(kernels::Dot(r, r, dims_));
      if (norm == 0.0) {
        Fail(ErrorKind::kDegenerate, "row '" + ids_[i] + "' is a zero vector but the matrix is "
                                     "flagged as L2-normalized");
      }
      if (std::abs(norm - 1.0) > 1e-4) {
        Fail(ErrorKind::kData, "row '" + ids_[i] + "' has norm " + std::to_string(norm) +
                                   " but the matrix is flagged as L2-normalized");
      }
    }
  }
}

DimensionMask::DimensionMask(std::size_t total_dims, std::vector<std::size_t> removed)
    : total_dims_(total_dims), removed_(std::move(removed)) {
  std::sort(removed_.begin(), removed_.end());
  if (std::adjacent_find(removed_.begin(), removed_.end()) != removed_.end()) {
    Fail(ErrorKind::kUsage, "dimension mask lists an index twice");
  }
  if (!removed_.empty() && removed_.back() >= total_dims_) {
    Fail(ErrorKind::kDimension, "dimension mask index " + std::to_string(removed_.back()) +
                                    " out of range for D=" + std::to_string(total_dims_));
  }
  if (removed_.size() >= total_dims_) {
    Fail(ErrorKind::kDegenerate, "dimension mask removes all " + std::to_string(total_dims_) +
                                     " dimensions");
  }
}

bool DimensionMask::contains(std::size_t dim) const {
  return std::binary_search(removed_.begin(), removed_.end(), dim);
}

std::vector<std::size_t> DimensionMask::kept() const {
  std::vector<std::size_t> out;
  out.reserve(kept_dims());
  auto it = removed_.begin();
  for (std::size_t d = 0; d < total_dims_; ++d) {
    if (it != removed_.end() && *it == d) {
      ++it;
    } else {
      out.push_back(d);
    }
  }
  return out;
}

std::string DimensionMask::Describe() const {
  return "removed " + std::to_string(removed_.size()) + "/" + std::to_string(total_dims_);
}

EmbeddingMatrix ApplyMask(const EmbeddingMatrix& matrix, const DimensionMask& mask) {
  if (mask.total_dims() != matrix.dims()) {
    Fail(ErrorKind::kDimension, "mask covers " + std::to_string(mask.total_dims()) +
                                    " dimensions but the matrix has " +
                                    std::to_string(matrix.dims()));
  }
  const std::vector<std::size_t> kept = mask.kept();
  std::vector<double> data;
  data.reserve(matrix.rows() * kept.size());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    const auto row = matrix.row(i);
    for (std::size_t d : kept) data.push_back(row[d]);
  }
  return {matrix.rows(), kept.size(), std::move(data), matrix.ids(), false};
}

std::vector<double> RowNorms(const EmbeddingMatrix& matrix) {
  std::vector<double> norms(matrix.rows());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    const double* r = matrix.row(i).data();
    norms[i] = std::sqrt(kernels::Dot(r, r, matrix.dims()));
  }
  return norms;
}

EmbeddingMatrix L2Normalize(const EmbeddingMatrix& matrix) {
  const std::vector<double> norms = RowNorms(matrix);
  std::vector<double> data(matrix.data());
  const std::size_t dims = matrix.dims();
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    if (norms[i] == 0.0) {
      Fail(ErrorKind::kDegenerate,
           "cannot L2-normalize zero vector in row '" + matrix.id(i) + "'");
    }
    for (std::size_t d = 0; d < dims; ++d) data[i * dims + d] /= norms[i];
  }
  return {matrix.rows(), dims, std::move(data), matrix.ids(), true};
}

}  // namespace embdim
