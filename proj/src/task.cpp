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

#include "embdim/task.hpp"

#include <set>
#include <unordered_set>

#include "embdim/error.hpp"

namespace embdim {

void Validate(const RetrievalTask& task) {
  if (task.queries.dims() != task.documents.dims()) {
    Fail(ErrorKind::kDimension, "task '" + task.name + "': queries have D=" +
                                    std::to_string(task.queries.dims()) + " but documents D=" +
                                    std::to_string(task.documents.dims()));
  }
  const std::unordered_set<std::string> query_ids(task.queries.ids().begin(),
                                                  task.queries.ids().end());
  const std::unordered_set<std::string> doc_ids(task.documents.ids().begin(),
                                                task.documents.ids().end());
  bool any_positive = false;
  for (const auto& [qid, judged] : task.qrels) {
    if (!query_ids.contains(qid)) {
      Fail(ErrorKind::kAlignment, "task '" + task.name + "': qrels query '" + qid +
                                      "' has no embedding");
    }
    for (const auto& [did, rel] : judged) {
      if (!doc_ids.contains(did)) {
        Fail(ErrorKind::kAlignment, "task '" + task.name + "': qrels document '" + did +
                                        "' has no embedding");
      }
      if (rel < 0) {
        Fail(ErrorKind::kData, "task '" + task.name + "': negative relevance for (" + qid +
                                   ", " + did + ")");
      }
      any_positive = any_positive || rel > 0;
    }
  }
  if (!any_positive) {
    Fail(ErrorKind::kDegenerate, "task '" + task.name + "': no query has a relevant document");
  }
}

void Validate(const ClassificationTask& task) {
  if (task.train.dims() != task.test.dims()) {
    Fail(ErrorKind::kDimension, "task '" + task.name + "': train has D=" +
                                    std::to_string(task.train.dims()) + " but test D=" +
                                    std::to_string(task.test.dims()));
  }
  if (task.train_labels.size() != task.train.rows() ||
      task.test_labels.size() != task.test.rows()) {
    Fail(ErrorKind::kAlignment, "task '" + task.name + "': label count does not match rows");
  }
  if (task.n_classes() < 2) {
    Fail(ErrorKind::kDegenerate, "task '" + task.name + "': need at least two classes");
  }
  const auto n_classes = static_cast<int>(task.n_classes());
  std::set<int> train_classes;
  for (int label : task.train_labels) {
    if (label < 0 || label >= n_classes) {
      Fail(ErrorKind::kData, "task '" + task.name + "': class id out of range");
    }
    train_classes.insert(label);
  }
  for (int label : task.test_labels) {
    if (!train_classes.contains(label)) {
      Fail(ErrorKind::kData, "task '" + task.name + "': test class '" +
                                 (label >= 0 && label < n_classes ? task.class_names[label]
                                                                  : std::to_string(label)) +
                                 "' never appears in training labels");
    }
  }
}

const std::string& TaskName(const Task& task) {
  return std::visit([](const auto& t) -> const std::string& { return t.name; }, task);
}

std::size_t TaskDims(const Task& task) {
  return std::visit([](const auto& t) { return t.dims(); }, task);
}

const char* MetricName(Metric metric) noexcept {
  return metric == Metric::kNdcgAt10 ? "ndcg@10" : "accuracy";
}

double RelativePerformance(const EvalResult& trunc, const EvalResult& full) {
  if (trunc.task_name != full.task_name || trunc.metric != full.metric) {
    Fail(ErrorKind::kUsage, "relative performance needs results for the same task and metric");
  }
  if (full.score <= 0.0) {
    Fail(ErrorKind::kDegenerate,
         "task '" + full.task_name + "': full-embedding score is 0, relative performance undefined");
  }
  return trunc.score / full.score;
}

}  // namespace embdim
