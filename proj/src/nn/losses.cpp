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

#include "harmonize/nn/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "harmonize/error.hpp"

namespace harmonize::nn {

LossResult mse(const Matrix& pred, const Matrix& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw ConfigError("mse shape mismatch: " + std::to_string(pred.rows()) +
                      "x" + std::to_string(pred.cols()) + " vs " +
                      std::to_string(target.rows()) + "x" +
                      std::to_string(target.cols()));
  }
  if (pred.size() == 0) throw ConfigError("mse of an empty batch");
  const double count = static_cast<double>(pred.size());
  LossResult result;
  const Matrix diff = pred - target;
  result.value = diff.squaredNorm() / count;
  result.grad = (2.0 / count) * diff;
  return result;
}

LossResult bce(const Matrix& prob, std::span<const std::uint8_t> labels) {
  if (prob.cols() != 1) throw ConfigError("bce expects a single column");
  if (static_cast<std::size_t>(prob.rows()) != labels.size()) {
    throw ConfigError("bce has " + std::to_string(prob.rows()) +
                      " probabilities but " + std::to_string(labels.size()) +
                      " labels");
  }
  if (labels.empty()) throw ConfigError("bce of an empty batch");
  const double count = static_cast<double>(labels.size());
  LossResult result;
  result.grad.resize(prob.rows(), 1);
  double total = 0.0;
  for (Eigen::Index i = 0; i < prob.rows(); ++i) {
    const double p =
        std::clamp(prob(i, 0), kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
    const double y = labels[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    total -= y * std::log(p) + (1.0 - y) * std::log1p(-p);
    result.grad(i, 0) = (p - y) / (p * (1.0 - p) * count);
  }
  result.value = total / count;
  return result;
}

}  // namespace harmonize::nn
