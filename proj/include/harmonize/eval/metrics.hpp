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

#ifndef HARMONIZE_EVAL_METRICS_HPP_
#define HARMONIZE_EVAL_METRICS_HPP_

#include <span>

#include "harmonize/eval/classifier.hpp"

namespace harmonize::eval {

// Fraction of rows where (probability >= 0.5) equals the label.
double accuracy(std::span<const double> probabilities,
                std::span<const std::uint8_t> labels);
double accuracy(const Classifier& classifier, const Matrix& features,
                const LabelColumn& labels);

// Probability that a random positive scores above a random negative, ties
// counting one half. Computed from average ranks in O(n log n). Throws
// DataError unless both classes are present.
double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Accuracy of a random guess for balanced binary labels.
inline constexpr double kChanceAccuracy = 0.5;
// Zero-division guard in the tradeoff ratio.
inline constexpr double kTradeoffDelta = 1e-4;

// M_p = (c_a - c_r) / (c_n - c_r). Throws MetricError when c_n == c_r.
double privacy_leakage(double c_a, double c_n, double c_r = kChanceAccuracy);
// M_u, same normalization applied to a utility attribute.
double utility_performance(double c_a, double c_n, double c_r = kChanceAccuracy);
// T = M_p / (delta + M_u); lower is better.
double tradeoff(double m_p, double m_u, double delta = kTradeoffDelta);

}  // namespace harmonize::eval

#endif  // HARMONIZE_EVAL_METRICS_HPP_
