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

#include "embdim/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "embdim/error.hpp"
#include "embdim/kernels.hpp"
#include "embdim/parallel.hpp"

namespace embdim {
namespace {

std::size_t CheckLabels(const EmbeddingMatrix& train, std::span<const int> labels) {
  if (labels.size() != train.rows()) {
    Fail(ErrorKind::kDimension, "got " + std::to_string(labels.size()) + " labels for " +
                                    std::to_string(train.rows()) + " training rows");
  }
  int max_label = -1;
  for (int label : labels) {
    if (label < 0) Fail(ErrorKind::kData, "class ids must be non-negative");
    max_label = std::max(max_label, label);
  }
  const auto n_classes = static_cast<std::size_t>(max_label + 1);
  if (n_classes < 2) Fail(ErrorKind::kDegenerate, "training data holds a single class");
  std::vector<std::size_t> counts(n_classes, 0);
  for (int label : labels) ++counts[static_cast<std::size_t>(label)];
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] == 0) {
      Fail(ErrorKind::kDegenerate, "class " + std::to_string(c) + " has no training example");
    }
  }
  return n_classes;
}

std::vector<int> Iota(std::size_t n) {
  std::vector<int> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<int>(i);
  return ids;
}

}  // namespace

int Classifier::Predict(std::span<const double> x) const {
  if (x.size() != dims) Fail(ErrorKind::kDimension, "classifier input has wrong dimension");
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t c = 0; c < n_classes(); ++c) {
    const double score = kernels::Dot(weights.data() + c * dims, x.data(), dims) + bias[c];
    if (c == 0 || score > best_score) {
      best = c;
      best_score = score;
    }
  }
  return class_ids[best];
}

TrainedClassifier TrainLogisticRegression(const EmbeddingMatrix& train,
                                          std::span<const int> labels,
                                          const LogisticRegressionOptions& options) {
  const std::size_t n_classes = CheckLabels(train, labels);
  const EmbeddingMatrix x = L2Normalize(train);
  const std::size_t n = x.rows();
  const std::size_t dims = x.dims();
  const double inv_n = 1.0 / static_cast<double>(n);

  TrainedClassifier out;
  Classifier& model = out.model;
  model.dims = dims;
  model.class_ids = Iota(n_classes);
  model.weights.assign(n_classes * dims, 0.0);
  model.bias.assign(n_classes, 0.0);

  std::vector<double> residual(n * n_classes);  // p_ic - y_ic
  std::vector<double> sample_loss(n);
  std::vector<double> grad_w(n_classes * dims);
  std::vector<double> grad_b(n_classes);

  // Fills `residual` and returns the objective at the current parameters.
  auto forward = [&]() {
    ParallelFor(n, [&](std::size_t i) {
      const double* xi = x.row(i).data();
      double* r = residual.data() + i * n_classes;
      double max_logit = 0.0;
      for (std::size_t c = 0; c < n_classes; ++c) {
        r[c] = kernels::Dot(model.weights.data() + c * dims, xi, dims) + model.bias[c];
        if (c == 0 || r[c] > max_logit) max_logit = r[c];
      }
      double denom = 0.0;
      for (std::size_t c = 0; c < n_classes; ++c) denom += std::exp(r[c] - max_logit);
      const auto y = static_cast<std::size_t>(labels[i]);
      sample_loss[i] = std::log(denom) - (r[y] - max_logit);
      for (std::size_t c = 0; c < n_classes; ++c) {
        r[c] = std::exp(r[c] - max_logit) / denom - (c == y ? 1.0 : 0.0);
      }
    });
    double loss = 0.0;
    for (double l : sample_loss) loss += l;
    loss *= inv_n;
    const double w2 = kernels::Dot(model.weights.data(), model.weights.data(),
                                   model.weights.size());
    return loss + 0.5 * options.l2_penalty * w2;
  };

  out.loss_history.reserve(options.iterations + 1);
  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    out.loss_history.push_back(forward());
    ParallelFor(n_classes, [&](std::size_t c) {
      double* g = grad_w.data() + c * dims;
      std::fill(g, g + dims, 0.0);
      double gb = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = residual[i * n_classes + c];
        kernels::Axpy(r * inv_n, x.row(i).data(), g, dims);
        gb += r;
      }
      grad_b[c] = gb * inv_n;
      kernels::Axpy(options.l2_penalty, model.weights.data() + c * dims, g, dims);
    });
    kernels::Axpy(-options.learning_rate, grad_w.data(), model.weights.data(),
                  model.weights.size());
    kernels::Axpy(-options.learning_rate, grad_b.data(), model.bias.data(), n_classes);
  }
  out.loss_history.push_back(forward());
  return out;
}

Classifier TrainLinearClassifier(const EmbeddingMatrix& train, std::span<const int> labels,
                                 const LogisticRegressionOptions& options) {
  return TrainLogisticRegression(train, labels, options).model;
}

Classifier TrainNearestCentroid(const EmbeddingMatrix& train, std::span<const int> labels) {
  const std::size_t n_classes = CheckLabels(train, labels);
  const EmbeddingMatrix x = L2Normalize(train);
  const std::size_t dims = x.dims();

  Classifier model;
  model.dims = dims;
  model.class_ids = Iota(n_classes);
  model.weights.assign(n_classes * dims, 0.0);
  model.bias.assign(n_classes, 0.0);
  std::vector<std::size_t> counts(n_classes, 0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    kernels::Axpy(1.0, x.row(i).data(), model.weights.data() + c * dims, dims);
    ++counts[c];
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    double* w = model.weights.data() + c * dims;
    const double inv = 1.0 / static_cast<double>(counts[c]);
    for (std::size_t d = 0; d < dims; ++d) w[d] *= inv;
    model.bias[c] = -kernels::Dot(w, w, dims);
    for (std::size_t d = 0; d < dims; ++d) w[d] *= 2.0;
  }
  return model;
}

double Accuracy(const Classifier& classifier, const EmbeddingMatrix& rows,
                std::span<const int> labels) {
  if (labels.size() != rows.rows()) {
    Fail(ErrorKind::kDimension, "label count does not match rows");
  }
  const EmbeddingMatrix x = L2Normalize(rows);
  std::vector<char> correct(x.rows());
  ParallelFor(x.rows(), [&](std::size_t i) {
    correct[i] = classifier.Predict(x.row(i)) == labels[i] ? 1 : 0;
  });
  const auto hits = std::count(correct.begin(), correct.end(), char{1});
  return static_cast<double>(hits) / static_cast<double>(x.rows());
}

EvalResult EvaluateClassification(const ClassificationTask& task, const DimensionMask* mask,
                                  const ClassificationOptions& options) {
  if (task.train.dims() != task.test.dims()) {
    Fail(ErrorKind::kDimension, "task '" + task.name + "': train/test dimension mismatch");
  }
  const EmbeddingMatrix* train = &task.train;
  const EmbeddingMatrix* test = &task.test;
  std::optional<EmbeddingMatrix> masked_train;
  std::optional<EmbeddingMatrix> masked_test;
  if (mask != nullptr) {
    masked_train = ApplyMask(task.train, *mask);
    masked_test = ApplyMask(task.test, *mask);
    train = &*masked_train;
    test = &*masked_test;
  }
  const Classifier model = options.kind == ClassifierKind::kNearestCentroid
                               ? TrainNearestCentroid(*train, task.train_labels)
                               : TrainLinearClassifier(*train, task.train_labels, options.logistic);
  EvalResult result;
  result.task_name = task.name;
  result.metric = Metric::kAccuracy;
  result.score = Accuracy(model, *test, task.test_labels);
  if (mask != nullptr) {
    result.mask = *mask;
    result.mask_spec = mask->Describe();
  }
  return result;
}

}  // namespace embdim
