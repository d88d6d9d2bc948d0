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

#include "embdim/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "embdim/error.hpp"
#include "embdim/kernels.hpp"
#include "embdim/parallel.hpp"

namespace embdim {
namespace {

void RequireNonZero(const EmbeddingMatrix& m, const std::vector<double>& norms,
                    const char* role) {
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (norms[i] == 0.0) {
      Fail(ErrorKind::kDegenerate,
           std::string(role) + " '" + m.id(i) + "' is a zero vector; cosine is undefined");
    }
  }
}

bool HasPositive(const std::map<std::string, int>& judged) {
  return std::any_of(judged.begin(), judged.end(), [](const auto& kv) { return kv.second > 0; });
}

double GainOf(int rel, Gain gain) {
  return gain == Gain::kLinear ? static_cast<double>(rel) : std::exp2(rel) - 1.0;
}

// Top-k of one query given precomputed norms.
Ranking RankOne(const EmbeddingMatrix& queries, std::size_t q, double q_norm,
                const EmbeddingMatrix& docs, const std::vector<double>& doc_norms,
                std::size_t top_k) {
  const std::size_t dims = queries.dims();
  const double* qv = queries.row(q).data();
  std::vector<double> scores(docs.rows());
  for (std::size_t d = 0; d < docs.rows(); ++d) {
    scores[d] = kernels::Dot(qv, docs.row(d).data(), dims) / (q_norm * doc_norms[d]);
  }
  std::vector<std::size_t> order(docs.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return docs.id(a) < docs.id(b);
  };
  const std::size_t k = std::min(top_k, docs.rows());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    better);
  Ranking ranking;
  ranking.query_id = queries.id(q);
  ranking.doc_ids.reserve(k);
  ranking.scores.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    ranking.doc_ids.push_back(docs.id(order[i]));
    ranking.scores.push_back(scores[order[i]]);
  }
  return ranking;
}

}  // namespace

std::vector<Ranking> RankDocuments(const EmbeddingMatrix& queries,
                                   const EmbeddingMatrix& docs, std::size_t top_k) {
  if (queries.dims() != docs.dims()) {
    Fail(ErrorKind::kDimension, "queries have D=" + std::to_string(queries.dims()) +
                                    " but documents D=" + std::to_string(docs.dims()));
  }
  if (top_k == 0) Fail(ErrorKind::kUsage, "top_k must be at least 1");
  const auto q_norms = RowNorms(queries);
  const auto d_norms = RowNorms(docs);
  RequireNonZero(queries, q_norms, "query");
  RequireNonZero(docs, d_norms, "document");

  std::vector<Ranking> rankings(queries.rows());
  ParallelFor(queries.rows(), [&](std::size_t q) {
    rankings[q] = RankOne(queries, q, q_norms[q], docs, d_norms, top_k);
  });
  return rankings;
}

std::vector<double> CosineScores(const EmbeddingMatrix& queries, std::size_t query_row,
                                 const EmbeddingMatrix& docs,
                                 const std::vector<std::size_t>& doc_rows) {
  if (queries.dims() != docs.dims()) {
    Fail(ErrorKind::kDimension, "queries have D=" + std::to_string(queries.dims()) +
                                    " but documents D=" + std::to_string(docs.dims()));
  }
  const std::size_t dims = queries.dims();
  const double* qv = queries.row(query_row).data();
  const double q_norm = std::sqrt(kernels::Dot(qv, qv, dims));
  if (q_norm == 0.0) {
    Fail(ErrorKind::kDegenerate,
         "query '" + queries.id(query_row) + "' is a zero vector; cosine is undefined");
  }
  std::vector<double> scores;
  scores.reserve(doc_rows.size());
  for (std::size_t d : doc_rows) {
    const double* dv = docs.row(d).data();
    const double d_norm = std::sqrt(kernels::Dot(dv, dv, dims));
    if (d_norm == 0.0) {
      Fail(ErrorKind::kDegenerate,
           "document '" + docs.id(d) + "' is a zero vector; cosine is undefined");
    }
    scores.push_back(kernels::Dot(qv, dv, dims) / (q_norm * d_norm));
  }
  return scores;
}

std::optional<double> NdcgAtK(const Ranking& ranking, const std::map<std::string, int>& judged,
                              std::size_t k, Gain gain) {
  if (k == 0) Fail(ErrorKind::kUsage, "nDCG cutoff must be at least 1");
  if (!HasPositive(judged)) return std::nullopt;

  double dcg = 0.0;
  const std::size_t depth = std::min(k, ranking.doc_ids.size());
  for (std::size_t i = 0; i < depth; ++i) {
    const auto it = judged.find(ranking.doc_ids[i]);
    const int rel = it == judged.end() ? 0 : it->second;
    if (rel > 0) dcg += GainOf(rel, gain) / std::log2(static_cast<double>(i) + 2.0);
  }

  std::vector<int> ideal;
  ideal.reserve(judged.size());
  for (const auto& [doc, rel] : judged) ideal.push_back(rel);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, ideal.size()); ++i) {
    if (ideal[i] > 0) idcg += GainOf(ideal[i], gain) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg / idcg;
}

EvalResult EvaluateRetrieval(const RetrievalTask& task, const DimensionMask* mask,
                             const RetrievalOptions& options) {
  if (options.cutoff == 0) Fail(ErrorKind::kUsage, "nDCG cutoff must be at least 1");
  if (task.queries.dims() != task.documents.dims()) {
    Fail(ErrorKind::kDimension, "task '" + task.name + "': query/document dimension mismatch");
  }

  // Only queries with a positive judgment contribute; rank just those.
  std::vector<std::size_t> scored_rows;
  for (std::size_t q = 0; q < task.queries.rows(); ++q) {
    const auto it = task.qrels.find(task.queries.id(q));
    if (it != task.qrels.end() && HasPositive(it->second)) scored_rows.push_back(q);
  }
  if (scored_rows.empty()) {
    Fail(ErrorKind::kDegenerate, "task '" + task.name + "': no query has a relevant document");
  }

  const EmbeddingMatrix* queries = &task.queries;
  const EmbeddingMatrix* docs = &task.documents;
  std::optional<EmbeddingMatrix> masked_queries;
  std::optional<EmbeddingMatrix> masked_docs;
  if (mask != nullptr) {
    masked_queries = ApplyMask(task.queries, *mask);
    masked_docs = ApplyMask(task.documents, *mask);
    queries = &*masked_queries;
    docs = &*masked_docs;
  }

  const auto d_norms = RowNorms(*docs);
  RequireNonZero(*docs, d_norms, "document");
  const auto q_norms = RowNorms(*queries);
  for (std::size_t q : scored_rows) {
    if (q_norms[q] == 0.0) {
      Fail(ErrorKind::kDegenerate,
           "query '" + queries->id(q) + "' is a zero vector; cosine is undefined");
    }
  }

  std::vector<double> per_query(scored_rows.size());
  ParallelFor(scored_rows.size(), [&](std::size_t i) {
    const std::size_t q = scored_rows[i];
    const Ranking ranking = RankOne(*queries, q, q_norms[q], *docs, d_norms, options.cutoff);
    per_query[i] = *NdcgAtK(ranking, task.qrels.at(queries->id(q)), options.cutoff, options.gain);
  });

  EvalResult result;
  result.task_name = task.name;
  result.metric = Metric::kNdcgAt10;
  result.score = std::accumulate(per_query.begin(), per_query.end(), 0.0) /
                 static_cast<double>(per_query.size());
  if (mask != nullptr) {
    result.mask = *mask;
    result.mask_spec = mask->Describe();
  }
  return result;
}

}  // namespace embdim
