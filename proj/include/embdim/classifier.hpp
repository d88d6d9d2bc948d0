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
#include <span>
#include <vector>

#include "embdim/matrix.hpp"
#include "embdim/task.hpp"

namespace embdim {

// Linear scorer over C classes: predicts argmax_c (w_c . x + b_c), lowest class
// id on ties. Weights are stored class-major (row c is the weight column of
// class c in the D x C view).
struct Classifier {
  std::size_t dims = 0;
  std::vector<int> class_ids;
  std::vector<double> weights;  // C * dims
  std::vector<double> bias;     // C

  std::size_t n_classes() const noexcept { return class_ids.size(); }
  std::span<const double> weight_column(std::size_t c) const {
    return {weights.data() + c * dims, dims};
  }
  int Predict(std::span<const double> x) const;
};

enum class ClassifierKind { kLogisticRegression, kNearestCentroid };

struct LogisticRegressionOptions {
  double learning_rate = 0.5;
  std::size_t iterations = 300;
  double l2_penalty = 1e-4;
};

struct TrainedClassifier {
  Classifier model;
  // Objective before each update plus the final value (iterations + 1 entries).
  std::vector<double> loss_history;
};

// Multinomial logistic regression by full-batch gradient descent from zero
// weights on L2-normalized copies of the inputs. Objective:
//   mean_i -log softmax(W x_i + b)[y_i] + (l2_penalty / 2) * ||W||^2
// Labels are class ids in [0, C); every class in [0, C) needs an example and
// C >= 2. Fully deterministic.
TrainedClassifier TrainLogisticRegression(const EmbeddingMatrix& train,
                                          std::span<const int> labels,
                                          const LogisticRegressionOptions& options = {});

Classifier TrainLinearClassifier(const EmbeddingMatrix& train, std::span<const int> labels,
                                 const LogisticRegressionOptions& options = {});

// Nearest class mean (Euclidean, on normalized inputs) expressed as a linear
// scorer: w_c = 2 mu_c, b_c = -||mu_c||^2.
Classifier TrainNearestCentroid(const EmbeddingMatrix& train, std::span<const int> labels);

// Fraction of rows whose prediction matches the label. Rows are L2-normalized
// before scoring.
double Accuracy(const Classifier& classifier, const EmbeddingMatrix& rows,
                std::span<const int> labels);

struct ClassificationOptions {
  ClassifierKind kind = ClassifierKind::kLogisticRegression;
  LogisticRegressionOptions logistic;
};

// Masks train and test identically, re-normalizes, trains, and returns test
// accuracy.
EvalResult EvaluateClassification(const ClassificationTask& task,
                                  const DimensionMask* mask = nullptr,
                                  const ClassificationOptions& options = {});

}  // namespace embdim
