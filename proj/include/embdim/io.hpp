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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "embdim/matrix.hpp"
#include "embdim/task.hpp"

namespace embdim::io {

// EMB1 layout (little-endian):
//   [0, 4)   "EMB1"
//   [4, 8)   uint32 N (rows)
//   [8, 12)  uint32 D (dims)
//   [12]     dtype code; 1 = IEEE-754 binary32, everything else reserved
//   [13, 16) zero padding
//   [16, ..) N * D binary32 values, row-major
//
// Row ids live next to the payload in `<stem>.ids.txt`, one per line.
// An optional `<stem>.meta.json` carries {"model", "dataset", "l2_normalized"}.
inline constexpr char kMagic[4] = {'E', 'M', 'B', '1'};
inline constexpr unsigned char kDtypeFloat32 = 1;
inline constexpr std::size_t kHeaderBytes = 16;

struct EmbeddingMeta {
  std::string model;
  std::string dataset;
  bool l2_normalized = false;
};

std::filesystem::path IdsPath(const std::filesystem::path& emb_path);
std::filesystem::path MetaPath(const std::filesystem::path& emb_path);

EmbeddingMatrix LoadEmbeddings(const std::filesystem::path& path);

// Writes the payload, the ids sidecar and, when given, the meta sidecar.
// Values are narrowed to binary32.
void SaveEmbeddings(const std::filesystem::path& path, const EmbeddingMatrix& matrix,
                    const std::optional<EmbeddingMeta>& meta = std::nullopt);

std::optional<EmbeddingMeta> LoadMeta(const std::filesystem::path& emb_path);

// `query_id<TAB>doc_id<TAB>relevance` per line.
Qrels LoadQrels(const std::filesystem::path& path);
void SaveQrels(const std::filesystem::path& path, const Qrels& qrels);

// `id<TAB>label` per line, in file order.
std::vector<std::pair<std::string, std::string>> LoadLabels(
    const std::filesystem::path& path);

// Task bundle directories:
//   retrieval:      queries.emb, docs.emb (+ sidecars), qrels.tsv
//   classification: train.emb, test.emb (+ sidecars), labels.tsv
// The task name is meta.json's "dataset" when present, else the directory name.
bool IsRetrievalBundle(const std::filesystem::path& dir);
bool IsClassificationBundle(const std::filesystem::path& dir);
Task LoadBundle(const std::filesystem::path& dir);

RetrievalTask LoadRetrievalTask(const std::string& name,
                                const std::filesystem::path& queries,
                                const std::filesystem::path& docs,
                                const std::filesystem::path& qrels);
ClassificationTask LoadClassificationTask(const std::string& name,
                                          const std::filesystem::path& train,
                                          const std::filesystem::path& test,
                                          const std::filesystem::path& labels);

void SaveBundle(const std::filesystem::path& dir, const RetrievalTask& task,
                const std::optional<EmbeddingMeta>& meta = std::nullopt);
void SaveBundle(const std::filesystem::path& dir, const ClassificationTask& task,
                const std::optional<EmbeddingMeta>& meta = std::nullopt);

// Writes `contents` to a temporary sibling and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace embdim::io
