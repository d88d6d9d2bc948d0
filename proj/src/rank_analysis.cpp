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

#include "embdim/rank_analysis.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "embdim/error.hpp"
#include "embdim/parallel.hpp"
#include "embdim/retrieval.hpp"
#include "embdim/stats.hpp"

namespace embdim {
namespace {

// Candidate rows ordered by score descending, document id ascending on ties.
std::vector<std::size_t> OrderByScore(const std::vector<std::size_t>& rows,
                                      const std::vector<double>& scores,
                                      const EmbeddingMatrix& docs) {
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return docs.id(rows[a]) < docs.id(rows[b]);
  });
  std::vector<std::size_t> ordered;
  ordered.reserve(rows.size());
  for (std::size_t i : idx) ordered.push_back(rows[i]);
  return ordered;
}

double SpearmanRows(const std::vector<std::size_t>& first,
                    const std::vector<std::size_t>& second) {
  const std::size_t n = first.size();
  std::unordered_map<std::size_t, std::size_t> position;
  for (std::size_t i = 0; i < n; ++i) position[second[i]] = i;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(position.at(first[i]));
    sum_sq += d * d;
  }
  const double nd = static_cast<double>(n);
  return 1.0 - 6.0 * sum_sq / (nd * (nd * nd - 1.0));
}

struct QueryCandidates {
  std::size_t task = 0;
  std::size_t query_row = 0;
  std::vector<std::size_t> full_order;
};

}  // namespace

double Spearman(std::span<const std::string> first, std::span<const std::string> second) {
  if (first.size() != second.size()) {
    Fail(ErrorKind::kData, "Spearman needs two orderings of the same ids");
  }
  if (first.size() < 2) Fail(ErrorKind::kDegenerate, "Spearman needs at least two items");
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < second.size(); ++i) {
    if (!position.emplace(second[i], i).second) {
      Fail(ErrorKind::kData, "duplicate id '" + second[i] + "' in ranking");
    }
  }
  std::unordered_map<std::string, char> seen;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const auto it = position.find(first[i]);
    if (it == position.end() || !seen.emplace(first[i], 1).second) {
      Fail(ErrorKind::kData, "rankings do not hold the same id set");
    }
    const double d = static_cast<double>(i) - static_cast<double>(it->second);
    sum_sq += d * d;
  }
  const auto n = static_cast<double>(first.size());
  return 1.0 - 6.0 * sum_sq / (n * (n * n - 1.0));
}

RankAgreementCurve RankAgreement(std::span<const RetrievalTask> tasks,
                                 const TruncationSpec& spec, std::span<const double> fractions,
                                 std::size_t depth) {
  if (tasks.empty()) Fail(ErrorKind::kUsage, "rank agreement needs at least one task");
  if (spec.runs == 0) Fail(ErrorKind::kUsage, "runs must be at least 1");
  const std::size_t dims = tasks[0].dims();
  for (const auto& task : tasks) {
    if (task.dims() != dims) Fail(ErrorKind::kDimension, "tasks disagree on dimensionality");
    if (depth < 2 || depth > task.documents.rows()) {
      Fail(ErrorKind::kUsage, "depth must lie in [2, " + std::to_string(task.documents.rows()) +
                                  "] for task '" + task.name + "'");
    }
  }
  for (double f : fractions) RemovalCount(dims, f);
  const std::size_t runs = spec.mode == TruncationMode::kRandom ? spec.runs : 1;

  // Candidate sets from the full embeddings, ordered by the same scoring
  // routine used after truncation.
  std::vector<QueryCandidates> candidates;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& task = tasks[t];
    for (std::size_t q = 0; q < task.queries.rows(); ++q) {
      const auto it = task.qrels.find(task.queries.id(q));
      if (it == task.qrels.end()) continue;
      if (std::none_of(it->second.begin(), it->second.end(),
                       [](const auto& kv) { return kv.second > 0; })) {
        continue;
      }
      candidates.push_back({t, q, {}});
    }
  }
  if (candidates.empty()) {
    Fail(ErrorKind::kDegenerate, "no query has a relevant document");
  }
  ParallelFor(candidates.size(), [&](std::size_t i) {
    auto& c = candidates[i];
    const auto& task = tasks[c.task];
    std::vector<std::size_t> all(task.documents.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto scores = CosineScores(task.queries, c.query_row, task.documents, all);
    auto ordered = OrderByScore(all, scores, task.documents);
    ordered.resize(depth);
    const auto top_scores = CosineScores(task.queries, c.query_row, task.documents, ordered);
    c.full_order = OrderByScore(ordered, top_scores, task.documents);
  });

  RankAgreementCurve curve(fractions.size());
  for (std::size_t f = 0; f < fractions.size(); ++f) {
    std::vector<double> rhos(runs * candidates.size());
    for (std::size_t r = 0; r < runs; ++r) {
      std::vector<EmbeddingMatrix> queries;
      std::vector<EmbeddingMatrix> docs;
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        const DimensionMask mask = MakeMask(spec, dims, fractions[f], r, t);
        queries.push_back(ApplyMask(tasks[t].queries, mask));
        docs.push_back(ApplyMask(tasks[t].documents, mask));
      }
      ParallelFor(candidates.size(), [&](std::size_t i) {
        const auto& c = candidates[i];
        const auto scores = CosineScores(queries[c.task], c.query_row, docs[c.task], c.full_order);
        const auto truncated = OrderByScore(c.full_order, scores, docs[c.task]);
        rhos[r * candidates.size() + i] = SpearmanRows(c.full_order, truncated);
      });
    }
    curve[f] = {fractions[f], Mean(rhos), PopulationStd(rhos), candidates.size()};
  }
  return curve;
}

}  // namespace embdim
