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

#ifndef HARMONIZE_NN_LOSSES_HPP_
#define HARMONIZE_NN_LOSSES_HPP_

#include <span>

#include "harmonize/types.hpp"

namespace harmonize::nn {

// Probabilities are clamped to [eps, 1 - eps] before taking logs.
inline constexpr double kProbabilityEpsilon = 1e-7;

struct LossResult {
  double value = 0.0;
  Matrix grad;  // d value / d prediction, same shape as the prediction
};

// Mean squared error over all b*n entries.
LossResult mse(const Matrix& pred, const Matrix& target);

// Mean binary cross-entropy. `prob` is a b x 1 column of probabilities.
LossResult bce(const Matrix& prob, std::span<const std::uint8_t> labels);

}  // namespace harmonize::nn

#endif  // HARMONIZE_NN_LOSSES_HPP_
