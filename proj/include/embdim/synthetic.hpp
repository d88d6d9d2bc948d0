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
#include <cstdint>
#include <filesystem>
#include <vector>

#include "embdim/task.hpp"

// Seeded synthetic tasks with known structure. All draws come from SplitMix64,
// so a given seed yields the same task on every platform. Every query owns
// `docs_per_query` documents with relevance 1; ids are zero-padded so that
// lexicographic order equals creation order.

namespace embdim::synthetic {

// A few latent factors tiled across all dimensions (dim j carries factor
// j mod latent_dims) plus independent per-dimension noise. Any large subset
// of dimensions still carries every factor.
struct RedundantSignalParams {
  std::size_t dims = 128;
  std::size_t latent_dims = 8;
  std::size_t n_queries = 40;
  std::size_t docs_per_query = 5;
  double relevant_noise = 0.5;   // spread of relevant docs around their query
  double dimension_noise = 0.3;  // independent noise per dimension
};

RetrievalTask MakeRedundantSignalTask(std::uint64_t seed, const RedundantSignalParams& params = {});

// Query/document signal confined to `signal_dims`; every other dimension is
// independent low-amplitude noise.
struct ConcentratedSignalParams {
  std::size_t dims = 64;
  std::vector<std::size_t> signal_dims = {0, 1, 2, 3};
  std::size_t n_queries = 40;
  std::size_t docs_per_query = 5;
  double relevant_noise = 0.3;
  double background_noise = 0.1;
};

RetrievalTask MakeConcentratedSignalTask(std::uint64_t seed,
                                         const ConcentratedSignalParams& params = {});

// Good dimensions carry shared query/document signal. Planted dimensions carry
// anti-correlated noise: a relevant document takes minus its query's value
// (plus a little jitter), so every planted dimension lowers the cosine of
// relevant pairs and removing it helps.
struct PlantedDegradingParams {
  std::size_t dims = 64;
  std::size_t n_planted = 8;
  std::size_t n_queries = 40;
  std::size_t docs_per_query = 5;
  double good_noise = 1.0;     // relevant doc = query + good_noise * N(0, 1)
  double planted_scale = 2.0;  // query amplitude on planted dimensions
  double planted_jitter = 0.3;
};

struct PlantedTask {
  RetrievalTask task;
  std::vector<std::size_t> planted;  // sorted
};

PlantedTask MakePlantedDegradingTask(std::uint64_t seed, const PlantedDegradingParams& params = {});

// Two Gaussian blobs: class 0 centred at -separation on each signal dimension,
// class 1 at +separation, isotropic noise `sigma` everywhere.
struct BlobParams {
  std::size_t dims = 10;
  std::size_t signal_dims = 1;
  std::size_t n_train = 200;
  std::size_t n_test = 200;
  double separation = 2.0;
  double sigma = 0.5;
};

ClassificationTask MakeBlobClassificationTask(std::uint64_t seed, const BlobParams& params = {});

// Adds `offset` to dimension `dim` of every query and document. Used to plant
// an outlier dimension in the mean query embedding.
void AddDimensionOffset(RetrievalTask& task, std::size_t dim, double offset);

// Multiplies dimension `dim` of every row by `factor` after replacing it with
// fresh N(0, 1) noise.
void ReplaceWithScaledNoise(RetrievalTask& task, std::size_t dim, double factor,
                            std::uint64_t seed);

// Writes the toy bundles the CLI ships with:
//   <dir>/toy-retrieval-a, <dir>/toy-retrieval-b  (planted-degrading, D = 64)
//   <dir>/toy-classification                      (blobs, D = 64)
// Returns the bundle directories in that order.
std::vector<std::filesystem::path> WriteToyBundles(const std::filesystem::path& dir,
                                                   std::uint64_t seed);

}  // namespace embdim::synthetic
