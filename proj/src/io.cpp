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

#include "embdim/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "embdim/error.hpp"

namespace embdim::io {
namespace fs = std::filesystem;
namespace {

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::uint32_t ReadU32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

void AppendU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

fs::path StemPath(const fs::path& emb_path) {
  fs::path stem = emb_path;
  if (stem.extension() == ".emb") stem.replace_extension();
  return stem;
}

}  // namespace

fs::path IdsPath(const fs::path& emb_path) {
  return fs::path(StemPath(emb_path).string() + ".ids.txt");
}

fs::path MetaPath(const fs::path& emb_path) {
  return fs::path(StemPath(emb_path).string() + ".meta.json");
}

std::optional<EmbeddingMeta> LoadMeta(const fs::path& emb_path) {
  const fs::path path = MetaPath(emb_path);
  if (!fs::exists(path)) return std::nullopt;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, "'" + path.string() + "': " + e.what());
  }
  if (!doc.is_object()) Fail(ErrorKind::kFormat, "'" + path.string() + "' is not a JSON object");
  EmbeddingMeta meta;
  try {
    meta.model = doc.value("model", "");
    meta.dataset = doc.value("dataset", "");
    meta.l2_normalized = doc.value("l2_normalized", false);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, "'" + path.string() + "': " + e.what());
  }
  return meta;
}

EmbeddingMatrix LoadEmbeddings(const fs::path& path) {
  const std::string bytes = ReadFile(path);
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    Fail(ErrorKind::kFormat, "'" + path.string() + "' does not start with the EMB1 header");
  }
  const std::uint32_t rows = ReadU32(bytes.data() + 4);
  const std::uint32_t dims = ReadU32(bytes.data() + 8);
  const auto dtype = static_cast<unsigned char>(bytes[12]);
  if (dtype != kDtypeFloat32) {
    Fail(ErrorKind::kFormat,
         "'" + path.string() + "': unsupported dtype code " + std::to_string(dtype));
  }
  if (bytes[13] != 0 || bytes[14] != 0 || bytes[15] != 0) {
    Fail(ErrorKind::kFormat, "'" + path.string() + "': non-zero header padding");
  }
  const std::size_t count = std::size_t{rows} * dims;
  const std::size_t expected = kHeaderBytes + count * 4;
  if (bytes.size() < expected) {
    Fail(ErrorKind::kTruncated, "'" + path.string() + "': header promises " +
                                    std::to_string(rows) + "x" + std::to_string(dims) +
                                    " values but the payload is " +
                                    std::to_string(bytes.size() - kHeaderBytes) + " bytes");
  }
  if (bytes.size() > expected) {
    Fail(ErrorKind::kFormat, "'" + path.string() + "': trailing bytes after the payload");
  }

  std::vector<double> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    const float value = std::bit_cast<float>(ReadU32(bytes.data() + kHeaderBytes + 4 * i));
    if (!std::isfinite(value)) {
      Fail(ErrorKind::kData, "'" + path.string() + "': non-finite value at row " +
                                 std::to_string(i / std::max<std::size_t>(dims, 1)) +
                                 ", dimension " + std::to_string(i % std::max<std::size_t>(dims, 1)));
    }
    data[i] = value;
  }

  const fs::path ids_path = IdsPath(path);
  if (!fs::exists(ids_path)) {
    Fail(ErrorKind::kIo, "missing ids sidecar '" + ids_path.string() + "'");
  }
  std::vector<std::string> ids = SplitLines(ReadFile(ids_path));
  if (ids.size() != rows) {
    Fail(ErrorKind::kAlignment, "'" + ids_path.string() + "' has " + std::to_string(ids.size()) +
                                    " ids for " + std::to_string(rows) + " rows");
  }
  const auto meta = LoadMeta(path);
  return {rows, dims, std::move(data), std::move(ids), meta && meta->l2_normalized};
}

void SaveEmbeddings(const fs::path& path, const EmbeddingMatrix& matrix,
                    const std::optional<EmbeddingMeta>& meta) {
  std::string out;
  out.reserve(kHeaderBytes + matrix.data().size() * 4);
  out.append(kMagic, 4);
  AppendU32(out, static_cast<std::uint32_t>(matrix.rows()));
  AppendU32(out, static_cast<std::uint32_t>(matrix.dims()));
  out.push_back(static_cast<char>(kDtypeFloat32));
  out.append(3, '\0');
  for (double v : matrix.data()) AppendU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  WriteFileAtomic(path, out);

  std::string ids;
  for (const auto& id : matrix.ids()) {
    if (id.find('\n') != std::string::npos) {
      Fail(ErrorKind::kData, "row id contains a newline");
    }
    ids += id;
    ids += '\n';
  }
  WriteFileAtomic(IdsPath(path), ids);

  if (meta) {
    const nlohmann::json doc = {{"model", meta->model},
                                {"dataset", meta->dataset},
                                {"l2_normalized", meta->l2_normalized}};
    WriteFileAtomic(MetaPath(path), doc.dump(2) + "\n");
  }
}

Qrels LoadQrels(const fs::path& path) {
  Qrels qrels;
  std::size_t line_no = 0;
  for (const auto& line : SplitLines(ReadFile(path))) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 3) {
      Fail(ErrorKind::kData, "'" + path.string() + "' line " + std::to_string(line_no) +
                                 ": expected query_id<TAB>doc_id<TAB>relevance");
    }
    int rel = 0;
    std::size_t used = 0;
    try {
      rel = std::stoi(fields[2], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != fields[2].size() || fields[2].empty() || rel < 0) {
      Fail(ErrorKind::kData, "'" + path.string() + "' line " + std::to_string(line_no) +
                                 ": relevance must be a non-negative integer");
    }
    qrels[fields[0]][fields[1]] = rel;
  }
  return qrels;
}

void SaveQrels(const fs::path& path, const Qrels& qrels) {
  std::string out;
  for (const auto& [qid, judged] : qrels) {
    for (const auto& [did, rel] : judged) {
      out += qid + '\t' + did + '\t' + std::to_string(rel) + '\n';
    }
  }
  WriteFileAtomic(path, out);
}

std::vector<std::pair<std::string, std::string>> LoadLabels(const fs::path& path) {
  std::vector<std::pair<std::string, std::string>> labels;
  std::size_t line_no = 0;
  for (const auto& line : SplitLines(ReadFile(path))) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 2) {
      Fail(ErrorKind::kData, "'" + path.string() + "' line " + std::to_string(line_no) +
                                 ": expected id<TAB>label");
    }
    labels.emplace_back(fields[0], fields[1]);
  }
  return labels;
}

RetrievalTask LoadRetrievalTask(const std::string& name, const fs::path& queries,
                                const fs::path& docs, const fs::path& qrels) {
  RetrievalTask task{name, LoadEmbeddings(queries), LoadEmbeddings(docs), LoadQrels(qrels)};
  Validate(task);
  return task;
}

ClassificationTask LoadClassificationTask(const std::string& name, const fs::path& train,
                                          const fs::path& test, const fs::path& labels) {
  ClassificationTask task;
  task.name = name;
  task.train = LoadEmbeddings(train);
  task.test = LoadEmbeddings(test);

  std::map<std::string, std::string> label_of;
  for (auto& [id, label] : LoadLabels(labels)) {
    auto [it, inserted] = label_of.emplace(id, label);
    if (!inserted && it->second != label) {
      Fail(ErrorKind::kData, "'" + labels.string() + "': conflicting labels for id '" + id + "'");
    }
  }
  auto lookup = [&](const EmbeddingMatrix& m) {
    std::vector<std::string> out;
    out.reserve(m.rows());
    for (const auto& id : m.ids()) {
      const auto it = label_of.find(id);
      if (it == label_of.end()) {
        Fail(ErrorKind::kAlignment, "'" + labels.string() + "' has no label for row '" + id + "'");
      }
      out.push_back(it->second);
    }
    return out;
  };
  const auto train_names = lookup(task.train);
  const auto test_names = lookup(task.test);

  std::vector<std::string> classes(train_names);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  auto class_id = [&](const std::string& label) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label) {
      Fail(ErrorKind::kData, "task '" + name + "': test label '" + label +
                                 "' never appears in training labels");
    }
    return static_cast<int>(it - classes.begin());
  };
  for (const auto& l : train_names) task.train_labels.push_back(class_id(l));
  for (const auto& l : test_names) task.test_labels.push_back(class_id(l));
  task.class_names = std::move(classes);
  Validate(task);
  return task;
}

bool IsRetrievalBundle(const fs::path& dir) {
  return fs::exists(dir / "queries.emb") && fs::exists(dir / "docs.emb") &&
         fs::exists(dir / "qrels.tsv");
}

bool IsClassificationBundle(const fs::path& dir) {
  return fs::exists(dir / "train.emb") && fs::exists(dir / "test.emb") &&
         fs::exists(dir / "labels.tsv");
}

Task LoadBundle(const fs::path& dir) {
  const std::string fallback = fs::path(dir).lexically_normal().filename().empty()
                                   ? fs::path(dir).lexically_normal().parent_path().filename().string()
                                   : fs::path(dir).lexically_normal().filename().string();
  auto name_from = [&](const fs::path& emb) {
    const auto meta = LoadMeta(emb);
    return meta && !meta->dataset.empty() ? meta->dataset : fallback;
  };
  if (IsRetrievalBundle(dir)) {
    return LoadRetrievalTask(name_from(dir / "queries.emb"), dir / "queries.emb",
                             dir / "docs.emb", dir / "qrels.tsv");
  }
  if (IsClassificationBundle(dir)) {
    return LoadClassificationTask(name_from(dir / "train.emb"), dir / "train.emb",
                                  dir / "test.emb", dir / "labels.tsv");
  }
  Fail(ErrorKind::kUsage, "'" + dir.string() + "' is not a task bundle (expected queries.emb, "
                          "docs.emb, qrels.tsv or train.emb, test.emb, labels.tsv)");
}

void SaveBundle(const fs::path& dir, const RetrievalTask& task,
                const std::optional<EmbeddingMeta>& meta) {
  fs::create_directories(dir);
  SaveEmbeddings(dir / "queries.emb", task.queries, meta);
  SaveEmbeddings(dir / "docs.emb", task.documents, meta);
  SaveQrels(dir / "qrels.tsv", task.qrels);
}

void SaveBundle(const fs::path& dir, const ClassificationTask& task,
                const std::optional<EmbeddingMeta>& meta) {
  fs::create_directories(dir);
  SaveEmbeddings(dir / "train.emb", task.train, meta);
  SaveEmbeddings(dir / "test.emb", task.test, meta);
  std::string labels;
  for (std::size_t i = 0; i < task.train.rows(); ++i) {
    labels += task.train.id(i) + '\t' + task.class_names[task.train_labels[i]] + '\n';
  }
  for (std::size_t i = 0; i < task.test.rows(); ++i) {
    labels += task.test.id(i) + '\t' + task.class_names[task.test_labels[i]] + '\n';
  }
  WriteFileAtomic(dir / "labels.tsv", labels);
}

void WriteFileAtomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp =
      fs::path(path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid())));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorKind::kIo, "cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) Fail(ErrorKind::kIo, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    Fail(ErrorKind::kIo, "cannot move output into '" + path.string() + "'");
  }
}

}  // namespace embdim::io
