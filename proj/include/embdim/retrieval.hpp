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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "embdim/matrix.hpp"
#include "embdim/task.hpp"

namespace embdim {

// Top documents for one query, best first. Scores are cosine similarities;
// equal scores are ordered by ascending document id.
struct Ranking {
  std::string query_id;
  std::vector<std::string> doc_ids;
  std::vector<double> scores;
};

// Exhaustive cosine top-k for every query row. top_k is clamped to the
// document count. Zero rows are rejected by name.
std::vector<Ranking> RankDocuments(const EmbeddingMatrix& queries,
                                   const EmbeddingMatrix& docs, std::size_t top_k);

// Cosine similarity of one query row against the given document rows, in the
// given order.
std::vector<double> CosineScores(const EmbeddingMatrix& queries, std::size_t query_row,
                                 const EmbeddingMatrix& docs,
                                 const std::vector<std::size_t>& doc_rows);

enum class Gain { kLinear, kExponential };

// DCG@k / IDCG@k with rel / log2(i + 1) discounting (gain rel or 2^rel - 1).
// Unjudged documents have relevance 0. Returns nullopt when the query has no
// document with relevance > 0, i.e. the query is excluded from averages.
std::optional<double> NdcgAtK(const Ranking& ranking,
                              const std::map<std::string, int>& judged, std::size_t k,
                              Gain gain = Gain::kLinear);

struct RetrievalOptions {
  std::size_t cutoff = 10;
  Gain gain = Gain::kLinear;
};

// Mean nDCG@cutoff over queries with at least one relevant document. The
// mask, when given, is applied to queries and documents alike.
EvalResult EvaluateRetrieval(const RetrievalTask& task, const DimensionMask* mask = nullptr,
                             const RetrievalOptions& options = {});

}  // namespace embdim
