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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "embdim/error.hpp"
#include "embdim/retrieval.hpp"
#include "test_support.hpp"

namespace embdim {
namespace {

using testing::GaussianMatrix;

// Reference DCG/IDCG straight from the formula.
double OracleNdcg(const std::vector<int>& ranked_rels, std::vector<int> all_rels, std::size_t k,
                  Gain gain) {
  auto g = [&](int rel) { return gain == Gain::kLinear ? rel : std::pow(2.0, rel) - 1.0; };
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, ranked_rels.size()); ++i) {
    dcg += g(ranked_rels[i]) / std::log2(static_cast<double>(i) + 2.0);
  }
  std::sort(all_rels.rbegin(), all_rels.rend());
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, all_rels.size()); ++i) {
    idcg += g(all_rels[i]) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg / idcg;
}

TEST(Ndcg, Examples) {
  Ranking one{"q", {"d1"}, {1.0}};
  EXPECT_DOUBLE_EQ(*NdcgAtK(one, {{"d1", 1}}, 1), 1.0);
  Ranking two{"q", {"d1", "d2"}, {1.0, 0.5}};
  EXPECT_NEAR(*NdcgAtK(two, {{"d1", 0}, {"d2", 1}}, 2), 0.6309297535714575, 1e-12);
  EXPECT_FALSE(NdcgAtK(two, {{"d1", 0}}, 2).has_value());
  EXPECT_FALSE(NdcgAtK(two, {}, 2).has_value());
}

TEST(Ndcg, UnjudgedDocumentsCountAsZero) {
  Ranking r{"q", {"x", "d2"}, {1.0, 0.5}};
  EXPECT_NEAR(*NdcgAtK(r, {{"d2", 1}}, 2), 1.0 / std::log2(3.0), 1e-12);
}

// Every permutation of up to five documents under every relevance vector in
// {0,1,2}^n and every cutoff, for both gain conventions.
TEST(Ndcg, MatchesEnumerationOracle) {
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    std::size_t assignments = 1;
    for (std::size_t i = 0; i < n; ++i) assignments *= 3;
    for (std::size_t code = 0; code < assignments; ++code) {
      std::vector<int> rels(n);
      std::map<std::string, int> judged;
      std::size_t c = code;
      for (std::size_t i = 0; i < n; ++i) {
        rels[i] = static_cast<int>(c % 3);
        c /= 3;
        judged["d" + std::to_string(i)] = rels[i];
      }
      const bool any_positive = std::any_of(rels.begin(), rels.end(), [](int r) { return r > 0; });
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      do {
        Ranking ranking{"q", {}, {}};
        std::vector<int> ranked;
        for (std::size_t i : perm) {
          ranking.doc_ids.push_back("d" + std::to_string(i));
          ranking.scores.push_back(1.0);
          ranked.push_back(rels[i]);
        }
        for (std::size_t k = 1; k <= n + 1; ++k) {
          for (Gain gain : {Gain::kLinear, Gain::kExponential}) {
            const auto got = NdcgAtK(ranking, judged, k, gain);
            ASSERT_EQ(got.has_value(), any_positive);
            if (got) {
              ASSERT_NEAR(*got, OracleNdcg(ranked, rels, k, gain), 1e-12);
              ASSERT_GE(*got, 0.0);
              ASSERT_LE(*got, 1.0 + 1e-15);
            }
            ++checked;
          }
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  EXPECT_GT(checked, 100000u);
}

TEST(Ndcg, IdealOrderScoresOne) {
  Ranking r{"q", {"a", "b", "c", "x"}, {4, 3, 2, 1}};
  EXPECT_DOUBLE_EQ(*NdcgAtK(r, {{"a", 2}, {"b", 2}, {"c", 1}, {"x", 0}}, 10), 1.0);
}

TEST(RankDocuments, Examples) {
  const EmbeddingMatrix q(1, 2, {1, 0}, {"q"});
  const EmbeddingMatrix docs(2, 2, {1, 0, 0, 1}, {"a", "b"});
  const auto r = RankDocuments(q, docs, 10);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].doc_ids, (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(r[0].scores[0], 1.0);
  EXPECT_DOUBLE_EQ(r[0].scores[1], 0.0);

  const EmbeddingMatrix single(1, 2, {3, 4}, {"only"});
  const auto s = RankDocuments(q, single, 5);
  EXPECT_EQ(s[0].doc_ids, std::vector<std::string>{"only"});
  EXPECT_NEAR(s[0].scores[0], 0.6, 1e-15);
}

TEST(RankDocuments, ZeroRowsAreRejectedByName) {
  const EmbeddingMatrix q(1, 2, {1, 0}, {"q"});
  const EmbeddingMatrix docs(2, 2, {1, 0, 0, 0}, {"a", "zero-doc"});
  try {
    RankDocuments(q, docs, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerate);
    EXPECT_NE(std::string(e.what()).find("zero-doc"), std::string::npos);
  }
}

// O(N*M*D) reference scan with the documented tie-break.
std::vector<std::vector<std::string>> OracleRanking(const EmbeddingMatrix& q,
                                                    const EmbeddingMatrix& d, std::size_t k) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < q.rows(); ++i) {
    std::vector<std::pair<double, std::string>> scored;
    for (std::size_t j = 0; j < d.rows(); ++j) {
      double dot = 0, nq = 0, nd = 0;
      for (std::size_t c = 0; c < q.dims(); ++c) {
        dot += q.at(i, c) * d.at(j, c);
        nq += q.at(i, c) * q.at(i, c);
        nd += d.at(j, c) * d.at(j, c);
      }
      scored.emplace_back(dot / (std::sqrt(nq) * std::sqrt(nd)), d.id(j));
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::vector<std::string> ids;
    for (std::size_t r = 0; r < std::min(k, scored.size()); ++r) ids.push_back(scored[r].second);
    out.push_back(ids);
  }
  return out;
}

TEST(RankDocuments, MatchesReferenceScanWithTies) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto q = GaussianMatrix(8, 6, 10 + seed, "q");
    // Twenty documents: 14 random plus exact ties (duplicates and power-of-two
    // rescalings, whose cosines are bit-identical) under shuffled ids.
    const auto base = GaussianMatrix(14, 6, 100 + seed, "x");
    std::vector<double> data = base.data();
    const double scales[] = {1.0, 2.0, 0.5, 1.0, 4.0, 0.25};
    for (std::size_t t = 0; t < 6; ++t) {
      const auto src = base.row(t * 2);
      for (double v : src) data.push_back(v * scales[t]);
    }
    std::vector<std::string> ids;
    SplitMix64 rng(seed);
    for (std::size_t j = 0; j < 20; ++j) ids.push_back("doc" + std::to_string(rng.Below(1000)) + "_" + std::to_string(j));
    const EmbeddingMatrix docs(20, 6, std::move(data), ids);
    for (std::size_t k : {1u, 5u, 20u, 50u}) {
      const auto got = RankDocuments(q, docs, k);
      const auto want = OracleRanking(q, docs, k);
      ASSERT_EQ(got.size(), 8u);
      for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_EQ(got[i].query_id, q.id(i));
        EXPECT_EQ(got[i].doc_ids, want[i]) << "seed " << seed << " query " << i << " k " << k;
      }
    }
  }
}

TEST(RankDocuments, OrderInvariantUnderPositiveRowScaling) {
  const auto q = GaussianMatrix(4, 5, 1, "q");
  const auto docs = GaussianMatrix(12, 5, 2, "d");
  std::vector<double> scaled = docs.data();
  SplitMix64 rng(3);
  for (std::size_t j = 0; j < 12; ++j) {
    const double s = 0.1 + 10.0 * rng.Uniform();
    for (std::size_t c = 0; c < 5; ++c) scaled[j * 5 + c] *= s;
  }
  const auto a = RankDocuments(q, docs, 12);
  const auto b = RankDocuments(q, EmbeddingMatrix(12, 5, scaled, docs.ids()), 12);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].doc_ids, b[i].doc_ids);
}

RetrievalTask HandTask() {
  const EmbeddingMatrix queries(3, 2, {1, 0, 0, 1, -1, 0}, {"q0", "q1", "q2"});
  const EmbeddingMatrix docs(6, 2, {1, 0, 0.8, 0.6, 0.6, 0.8, 0, 1, -1, 0, 0, -1},
                             {"d0", "d1", "d2", "d3", "d4", "d5"});
  Qrels qrels{{"q0", {{"d1", 2}, {"d3", 1}}}, {"q1", {{"d0", 1}}}, {"q2", {{"d5", 0}}}};
  return {"hand", queries, docs, qrels};
}

// q0 ranks d0 d1 d2 d3 d5 d4: relevant d1 (2) at rank 2, d3 (1) at rank 4.
// q1 ranks d3 d2 d1 d0 d4 d5: relevant d0 at rank 4. q2 has no positive.
TEST(EvaluateRetrieval, HandComputedToyTask) {
  const double q0 = (2 / std::log2(3.0) + 1 / std::log2(5.0)) / (2 + 1 / std::log2(3.0));
  const double q1 = 1 / std::log2(5.0);
  const EvalResult r = EvaluateRetrieval(HandTask());
  EXPECT_EQ(r.metric, Metric::kNdcgAt10);
  EXPECT_EQ(r.task_name, "hand");
  EXPECT_NEAR(r.score, (q0 + q1) / 2, 1e-12);
  EXPECT_EQ(EvaluateRetrieval(HandTask()).score, r.score);
}

TEST(EvaluateRetrieval, ZeroColumnRemovalIsExact) {
  const auto q = GaussianMatrix(10, 6, 1, "q");
  const auto d = GaussianMatrix(30, 6, 2, "d");
  auto zero_col = [](const EmbeddingMatrix& m) {
    std::vector<double> data = m.data();
    for (std::size_t i = 0; i < m.rows(); ++i) data[i * m.dims() + 3] = 0.0;
    return EmbeddingMatrix(m.rows(), m.dims(), data, m.ids());
  };
  Qrels qrels;
  for (std::size_t i = 0; i < 10; ++i) qrels[q.id(i)][d.id(i * 3)] = 1;
  const RetrievalTask task{"z", zero_col(q), zero_col(d), qrels};
  const DimensionMask mask(6, {3});
  EXPECT_EQ(EvaluateRetrieval(task, &mask).score, EvaluateRetrieval(task).score);
}

// Masked evaluation equals evaluation of pre-masked copies.
TEST(EvaluateRetrieval, CommutesWithMasking) {
  const auto q = GaussianMatrix(12, 16, 5, "q");
  const auto d = GaussianMatrix(40, 16, 6, "d");
  Qrels qrels;
  for (std::size_t i = 0; i < 12; ++i) {
    qrels[q.id(i)][d.id(i)] = 1;
    qrels[q.id(i)][d.id(i + 12)] = 2;
  }
  const RetrievalTask task{"m", q, d, qrels};
  SplitMix64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const DimensionMask mask(16, SampleWithoutReplacement(16, 1 + rng.Below(14), rng));
    const RetrievalTask pre{"m", ApplyMask(q, mask), ApplyMask(d, mask), qrels};
    for (Gain gain : {Gain::kLinear, Gain::kExponential}) {
      RetrievalOptions options;
      options.gain = gain;
      EXPECT_EQ(EvaluateRetrieval(task, &mask, options).score,
                EvaluateRetrieval(pre, nullptr, options).score);
    }
  }
}

TEST(RelativePerformance, Arithmetic) {
  EvalResult full{"t", Metric::kNdcgAt10, 0.5, std::nullopt, "none"};
  EvalResult trunc{"t", Metric::kNdcgAt10, 0.45, std::nullopt, "x"};
  EXPECT_NEAR(RelativePerformance(trunc, full), 0.9, 1e-15);
  EXPECT_EQ(RelativePerformance(full, full), 1.0);
  EvalResult other{"u", Metric::kNdcgAt10, 0.45, std::nullopt, "x"};
  EXPECT_THROW(RelativePerformance(other, full), Error);
  EvalResult zero{"t", Metric::kNdcgAt10, 0.0, std::nullopt, "none"};
  try {
    RelativePerformance(trunc, zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerate);
  }
}

}  // namespace
}  // namespace embdim
