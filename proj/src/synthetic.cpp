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

#include "embdim/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "embdim/error.hpp"
#include "embdim/io.hpp"
#include "embdim/random.hpp"

namespace embdim::synthetic {
namespace {

std::string PaddedId(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%05zu", prefix, i);
  return buf;
}

std::vector<std::string> Ids(char prefix, std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(PaddedId(prefix, i));
  return ids;
}

Qrels OwnershipQrels(std::size_t n_queries, std::size_t docs_per_query) {
  Qrels qrels;
  for (std::size_t q = 0; q < n_queries; ++q) {
    for (std::size_t k = 0; k < docs_per_query; ++k) {
      qrels[PaddedId('q', q)][PaddedId('d', q * docs_per_query + k)] = 1;
    }
  }
  return qrels;
}

RetrievalTask Assemble(std::string name, std::size_t dims, std::size_t n_queries,
                       std::size_t docs_per_query, std::vector<double> queries,
                       std::vector<double> docs) {
  const std::size_t n_docs = n_queries * docs_per_query;
  RetrievalTask task{std::move(name),
                     EmbeddingMatrix(n_queries, dims, std::move(queries), Ids('q', n_queries)),
                     EmbeddingMatrix(n_docs, dims, std::move(docs), Ids('d', n_docs)),
                     OwnershipQrels(n_queries, docs_per_query)};
  Validate(task);
  return task;
}

void Require(bool ok, const char* what) {
  if (!ok) Fail(ErrorKind::kUsage, std::string("synthetic generator: ") + what);
}

}  // namespace

RetrievalTask MakeRedundantSignalTask(std::uint64_t seed, const RedundantSignalParams& p) {
  Require(p.dims >= 1 && p.latent_dims >= 1 && p.n_queries >= 1 && p.docs_per_query >= 1,
          "sizes must be positive");
  SplitMix64 rng(seed);
  const std::size_t n_docs = p.n_queries * p.docs_per_query;
  std::vector<double> query_latent(p.n_queries * p.latent_dims);
  for (double& v : query_latent) v = rng.Gaussian();

  std::vector<double> queries(p.n_queries * p.dims);
  for (std::size_t q = 0; q < p.n_queries; ++q) {
    for (std::size_t d = 0; d < p.dims; ++d) {
      queries[q * p.dims + d] = query_latent[q * p.latent_dims + d % p.latent_dims] +
                                p.dimension_noise * rng.Gaussian();
    }
  }
  std::vector<double> docs(n_docs * p.dims);
  std::vector<double> latent(p.latent_dims);
  for (std::size_t i = 0; i < n_docs; ++i) {
    const std::size_t owner = i / p.docs_per_query;
    for (std::size_t k = 0; k < p.latent_dims; ++k) {
      latent[k] = query_latent[owner * p.latent_dims + k] + p.relevant_noise * rng.Gaussian();
    }
    for (std::size_t d = 0; d < p.dims; ++d) {
      docs[i * p.dims + d] = latent[d % p.latent_dims] + p.dimension_noise * rng.Gaussian();
    }
  }
  return Assemble("redundant-signal", p.dims, p.n_queries, p.docs_per_query, std::move(queries),
                  std::move(docs));
}

RetrievalTask MakeConcentratedSignalTask(std::uint64_t seed, const ConcentratedSignalParams& p) {
  Require(!p.signal_dims.empty(), "need at least one signal dimension");
  for (std::size_t d : p.signal_dims) Require(d < p.dims, "signal dimension out of range");
  SplitMix64 rng(seed);
  const std::size_t n_docs = p.n_queries * p.docs_per_query;
  std::vector<char> is_signal(p.dims, 0);
  for (std::size_t d : p.signal_dims) is_signal[d] = 1;

  std::vector<double> queries(p.n_queries * p.dims);
  for (std::size_t q = 0; q < p.n_queries; ++q) {
    for (std::size_t d = 0; d < p.dims; ++d) {
      queries[q * p.dims + d] = is_signal[d] ? rng.Gaussian() : p.background_noise * rng.Gaussian();
    }
  }
  std::vector<double> docs(n_docs * p.dims);
  for (std::size_t i = 0; i < n_docs; ++i) {
    const std::size_t owner = i / p.docs_per_query;
    for (std::size_t d = 0; d < p.dims; ++d) {
      docs[i * p.dims + d] = is_signal[d]
                                 ? queries[owner * p.dims + d] + p.relevant_noise * rng.Gaussian()
                                 : p.background_noise * rng.Gaussian();
    }
  }
  return Assemble("concentrated-signal", p.dims, p.n_queries, p.docs_per_query,
                  std::move(queries), std::move(docs));
}

PlantedTask MakePlantedDegradingTask(std::uint64_t seed, const PlantedDegradingParams& p) {
  Require(p.n_planted < p.dims, "planted dimensions must leave good ones");
  SplitMix64 rng(seed);
  PlantedTask out;
  out.planted = SampleWithoutReplacement(p.dims, p.n_planted, rng);
  std::vector<char> planted(p.dims, 0);
  for (std::size_t d : out.planted) planted[d] = 1;

  const std::size_t n_docs = p.n_queries * p.docs_per_query;
  std::vector<double> queries(p.n_queries * p.dims);
  for (std::size_t q = 0; q < p.n_queries; ++q) {
    for (std::size_t d = 0; d < p.dims; ++d) {
      queries[q * p.dims + d] = (planted[d] ? p.planted_scale : 1.0) * rng.Gaussian();
    }
  }
  std::vector<double> docs(n_docs * p.dims);
  for (std::size_t i = 0; i < n_docs; ++i) {
    const double* query = queries.data() + (i / p.docs_per_query) * p.dims;
    for (std::size_t d = 0; d < p.dims; ++d) {
      docs[i * p.dims + d] = planted[d] ? -query[d] + p.planted_jitter * rng.Gaussian()
                                        : query[d] + p.good_noise * rng.Gaussian();
    }
  }
  out.task = Assemble("planted-degrading", p.dims, p.n_queries, p.docs_per_query,
                      std::move(queries), std::move(docs));
  return out;
}

ClassificationTask MakeBlobClassificationTask(std::uint64_t seed, const BlobParams& p) {
  Require(p.signal_dims >= 1 && p.signal_dims <= p.dims, "signal dimensions out of range");
  Require(p.n_train >= 2 && p.n_test >= 1, "need at least two training rows");
  SplitMix64 rng(seed);
  auto draw = [&](std::size_t n, char prefix, std::vector<int>& labels) {
    std::vector<double> data(n * p.dims);
    labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Alternate classes so both are always present.
      const int label = static_cast<int>(i % 2);
      labels[i] = label;
      const double centre = label == 0 ? -p.separation : p.separation;
      for (std::size_t d = 0; d < p.dims; ++d) {
        data[i * p.dims + d] = (d < p.signal_dims ? centre : 0.0) + p.sigma * rng.Gaussian();
      }
    }
    return EmbeddingMatrix(n, p.dims, std::move(data), Ids(prefix, n));
  };
  ClassificationTask task;
  task.name = "blobs";
  task.train = draw(p.n_train, 'r', task.train_labels);
  task.test = draw(p.n_test, 't', task.test_labels);
  task.class_names = {"neg", "pos"};
  Validate(task);
  return task;
}

void AddDimensionOffset(RetrievalTask& task, std::size_t dim, double offset) {
  Require(dim < task.dims(), "offset dimension out of range");
  auto shift = [&](const EmbeddingMatrix& m) {
    std::vector<double> data(m.data());
    for (std::size_t i = 0; i < m.rows(); ++i) data[i * m.dims() + dim] += offset;
    return EmbeddingMatrix(m.rows(), m.dims(), std::move(data), m.ids());
  };
  task.queries = shift(task.queries);
  task.documents = shift(task.documents);
}

void ReplaceWithScaledNoise(RetrievalTask& task, std::size_t dim, double factor,
                            std::uint64_t seed) {
  Require(dim < task.dims(), "noise dimension out of range");
  SplitMix64 rng(seed);
  auto replace = [&](const EmbeddingMatrix& m) {
    std::vector<double> data(m.data());
    for (std::size_t i = 0; i < m.rows(); ++i) data[i * m.dims() + dim] = factor * rng.Gaussian();
    return EmbeddingMatrix(m.rows(), m.dims(), std::move(data), m.ids());
  };
  task.queries = replace(task.queries);
  task.documents = replace(task.documents);
}

std::vector<std::filesystem::path> WriteToyBundles(const std::filesystem::path& dir,
                                                   std::uint64_t seed) {
  std::vector<std::filesystem::path> out;
  const char* names[] = {"toy-retrieval-a", "toy-retrieval-b"};
  for (std::size_t i = 0; i < 2; ++i) {
    PlantedTask planted = MakePlantedDegradingTask(SplitMix64::ForStream(seed, i).Next());
    planted.task.name = names[i];
    // One dimension with a large shared offset shows up as an outlier in the
    // mean query embedding.
    AddDimensionOffset(planted.task, 5, 6.0);
    out.push_back(dir / names[i]);
    io::SaveBundle(out.back(), planted.task, io::EmbeddingMeta{"toy-encoder", names[i], false});
  }
  BlobParams blobs;
  blobs.dims = 64;
  blobs.signal_dims = 2;
  ClassificationTask cls = MakeBlobClassificationTask(SplitMix64::ForStream(seed, 2).Next(), blobs);
  cls.name = "toy-classification";
  out.push_back(dir / "toy-classification");
  io::SaveBundle(out.back(), cls, io::EmbeddingMeta{"toy-encoder", cls.name, false});
  return out;
}

}  // namespace embdim::synthetic
