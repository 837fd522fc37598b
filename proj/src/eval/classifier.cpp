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

#include "harmonize/eval/classifier.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "harmonize/error.hpp"
#include "harmonize/nn/adam.hpp"
#include "harmonize/nn/losses.hpp"

namespace harmonize::eval {

namespace {

// Released features may carry constant columns; those pass through unscaled.
data::StandardizeStats lenient_stats(const Matrix& features) {
  data::StandardizeStats stats;
  stats.mean = features.colwise().mean().transpose();
  const Matrix centered = features.rowwise() - stats.mean.transpose();
  stats.sd = (centered.array().square().colwise().mean().sqrt()).transpose();
  for (Eigen::Index c = 0; c < stats.sd.size(); ++c) {
    if (!(stats.sd(c) > 1e-12)) stats.sd(c) = 1.0;
  }
  return stats;
}

}  // namespace

std::string_view classifier_name(ClassifierKind kind) {
  return kind == ClassifierKind::kLogistic ? "logistic" : "feedforward";
}

ClassifierKind parse_classifier(std::string_view name) {
  if (name == "logistic") return ClassifierKind::kLogistic;
  if (name == "feedforward") return ClassifierKind::kFeedforward;
  throw ConfigError("unknown classifier '" + std::string(name) + "'");
}

ClassifierSpec ClassifierSpec::logistic(std::uint64_t seed) {
  ClassifierSpec spec;
  spec.kind = ClassifierKind::kLogistic;
  spec.epochs = 20;
  spec.learning_rate = 1e-2;
  spec.seed = seed;
  return spec;
}

ClassifierSpec ClassifierSpec::feedforward(std::uint64_t seed) {
  ClassifierSpec spec;
  spec.kind = ClassifierKind::kFeedforward;
  spec.epochs = 30;
  spec.learning_rate = 1e-3;
  spec.hidden = {32, 16};
  spec.seed = seed;
  return spec;
}

std::vector<ClassifierSpec> default_specs(std::uint64_t seed) {
  return {ClassifierSpec::logistic(seed), ClassifierSpec::feedforward(seed)};
}

Vector Classifier::predict_proba(const Matrix& features) const {
  const Matrix out = nn::forward(net_, data::apply_standardizer(stats_, features));
  return out.col(0);
}

LabelColumn Classifier::predict(const Matrix& features) const {
  const Vector p = predict_proba(features);
  LabelColumn labels(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    labels[static_cast<std::size_t>(i)] = p(i) >= 0.5 ? 1 : 0;
  }
  return labels;
}

Classifier train_classifier(const ClassifierSpec& spec, const Matrix& features,
                            const LabelColumn& labels) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw ConfigError("classifier features and labels disagree in length");
  }
  if (labels.empty()) throw DataError("cannot train a classifier on zero rows");
  const auto ones = std::count(labels.begin(), labels.end(), std::uint8_t{1});
  if (ones == 0 || ones == static_cast<std::ptrdiff_t>(labels.size())) {
    throw DataError("classifier training labels contain a single class");
  }
  if (spec.epochs < 0 || spec.batch_size <= 0 || !(spec.learning_rate > 0)) {
    throw ConfigError("invalid classifier hyperparameters");
  }

  Rng rng(spec.seed);
  auto stats = lenient_stats(features);
  const Matrix x = data::apply_standardizer(stats, features);
  const int n = static_cast<int>(features.cols());

  std::vector<int> widths = {n};
  std::vector<nn::Activation> acts;
  if (spec.kind == ClassifierKind::kFeedforward) {
    for (int h : spec.hidden) {
      widths.push_back(h);
      acts.push_back(nn::Activation::kRelu);
    }
  }
  widths.push_back(1);
  acts.push_back(nn::Activation::kSigmoid);
  auto net = nn::DenseNet::initialize(widths, acts, rng);
  nn::AdamState opt(net, {.learning_rate = spec.learning_rate});

  const auto rows = labels.size();
  const auto batch_size = static_cast<std::size_t>(spec.batch_size);
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  Matrix batch_x;
  LabelColumn batch_y;
  nn::ForwardCache cache;
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t begin = 0; begin < rows; begin += batch_size) {
      const std::size_t end = std::min(rows, begin + batch_size);
      batch_x.resize(static_cast<Eigen::Index>(end - begin), n);
      batch_y.resize(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        batch_x.row(static_cast<Eigen::Index>(i - begin)) =
            x.row(static_cast<Eigen::Index>(order[i]));
        batch_y[i - begin] = labels[order[i]];
      }
      const Matrix prob = nn::forward(net, batch_x, &cache);
      const auto loss = nn::bce(prob, batch_y);
      const auto back = nn::backward(net, cache, loss.grad);
      nn::adam_step(net, back.params, opt);
    }
  }
  return Classifier(spec.kind, std::move(net), std::move(stats));
}

}  // namespace harmonize::eval
