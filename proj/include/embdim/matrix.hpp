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

namespace embdim {

// Dense row-major N x D matrix of embeddings with one unique id per row.
// Values are held in double precision; the on-disk format stores binary32.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;

  // Validates every invariant: N >= 1, D >= 1, finite values, unique ids and,
  // when `l2_normalized` is set, unit row norms within 1e-4.
  EmbeddingMatrix(std::size_t rows, std::size_t dims, std::vector<double> data,
                  std::vector<std::string> ids, bool l2_normalized = false);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dims() const noexcept { return dims_; }
  bool l2_normalized() const noexcept { return l2_normalized_; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dims_, dims_};
  }
  double at(std::size_t i, std::size_t d) const { return data_[i * dims_ + d]; }

  const std::vector<double>& data() const noexcept { return data_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& id(std::size_t i) const { return ids_[i]; }

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dims_ = 0;
  std::vector<double> data_;
  std::vector<std::string> ids_;
  bool l2_normalized_ = false;
};

// Set of removed dimension indices over a space of `total_dims` dimensions.
class DimensionMask {
 public:
  DimensionMask() = default;

  // `removed` may arrive in any order; duplicates, out-of-range indices or a
  // mask that removes every dimension are rejected.
  DimensionMask(std::size_t total_dims, std::vector<std::size_t> removed);

  static DimensionMask None(std::size_t total_dims) { return {total_dims, {}}; }

  std::size_t total_dims() const noexcept { return total_dims_; }
  std::size_t kept_dims() const noexcept { return total_dims_ - removed_.size(); }
  const std::vector<std::size_t>& removed() const noexcept { return removed_; }
  bool empty() const noexcept { return removed_.empty(); }
  bool contains(std::size_t dim) const;

  // Surviving indices in increasing order.
  std::vector<std::size_t> kept() const;

  // Short human-readable description, e.g. "removed 3/8".
  std::string Describe() const;

  friend bool operator==(const DimensionMask&, const DimensionMask&) = default;

 private:
  std::size_t total_dims_ = 0;
  std::vector<std::size_t> removed_;
};

// Drops the masked columns. Surviving columns keep their order and values
// bit-for-bit; the normalization flag is cleared.
EmbeddingMatrix ApplyMask(const EmbeddingMatrix& matrix, const DimensionMask& mask);

// Scales each row to unit Euclidean norm. Zero rows raise a degenerate-input
// error naming the row id.
EmbeddingMatrix L2Normalize(const EmbeddingMatrix& matrix);

// Euclidean norm of each row.
std::vector<double> RowNorms(const EmbeddingMatrix& matrix);

}  // namespace embdim
