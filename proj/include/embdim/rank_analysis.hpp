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

#include "embdim/task.hpp"
#include "embdim/truncation.hpp"

namespace embdim {

// Spearman's rho between two orderings of the same id set, ranks being list
// positions: 1 - 6 * sum(d^2) / (n (n^2 - 1)). Needs n >= 2.
double Spearman(std::span<const std::string> first, std::span<const std::string> second);

struct RankAgreementPoint {
  double fraction = 0.0;
  double mean_rho = 0.0;
  double std_rho = 0.0;  // population, over (query, run) pairs
  std::size_t n_queries = 0;
};

using RankAgreementCurve = std::vector<RankAgreementPoint>;

// For each query with a positive judgment, takes the full-embedding top-`depth`
// documents, re-scores exactly that set with truncated embeddings and compares
// the two orders. Random mode averages over spec.runs masks. Multiple tasks
// pool their queries; they must share D.
RankAgreementCurve RankAgreement(std::span<const RetrievalTask> tasks,
                                 const TruncationSpec& spec, std::span<const double> fractions,
                                 std::size_t depth = 100);

}  // namespace embdim
