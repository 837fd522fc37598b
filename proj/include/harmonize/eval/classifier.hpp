/*
 * Copyright 2026 The Harmonize Authors.
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

#ifndef HARMONIZE_EVAL_CLASSIFIER_HPP_
#define HARMONIZE_EVAL_CLASSIFIER_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "harmonize/data/standardize.hpp"
#include "harmonize/nn/dense_net.hpp"
#include "harmonize/types.hpp"

namespace harmonize::eval {

enum class ClassifierKind { kLogistic, kFeedforward };

std::string_view classifier_name(ClassifierKind kind);  // "logistic" / "feedforward"
ClassifierKind parse_classifier(std::string_view name);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::kLogistic;
  int epochs = 20;
  double learning_rate = 1e-2;
  int batch_size = 256;
  std::vector<int> hidden;  // feedforward only
  std::uint64_t seed = 0;

  static ClassifierSpec logistic(std::uint64_t seed = 0);
  // 16 -> 32 -> 16 -> 1 for 16 features.
  static ClassifierSpec feedforward(std::uint64_t seed = 0);
};

// The analyst's benchmark set: logistic regression and a feed-forward net.
std::vector<ClassifierSpec> default_specs(std::uint64_t seed);

// A trained binary classifier together with the standardizer it was fitted
// with; inputs are on the raw feature scale.
class Classifier {
 public:
  Classifier(ClassifierKind kind, nn::DenseNet net, data::StandardizeStats stats)
      : kind_(kind), net_(std::move(net)), stats_(std::move(stats)) {}

  ClassifierKind kind() const { return kind_; }
  const nn::DenseNet& network() const { return net_; }

  // Probability of class 1 per row.
  Vector predict_proba(const Matrix& features) const;
  LabelColumn predict(const Matrix& features) const;

 private:
  ClassifierKind kind_;
  nn::DenseNet net_;
  data::StandardizeStats stats_;
};

// Minibatch Adam on the mean cross-entropy. Single-class labels raise
// DataError.
Classifier train_classifier(const ClassifierSpec& spec, const Matrix& features,
                            const LabelColumn& labels);

}  // namespace harmonize::eval

#endif  // HARMONIZE_EVAL_CLASSIFIER_HPP_
