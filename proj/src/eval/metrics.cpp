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

#include "harmonize/eval/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "harmonize/error.hpp"

namespace harmonize::eval {

double accuracy(std::span<const double> probabilities,
                std::span<const std::uint8_t> labels) {
  if (probabilities.size() != labels.size()) {
    throw ConfigError("accuracy: predictions and labels disagree in length");
  }
  if (labels.empty()) throw DataError("accuracy of zero rows");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint8_t predicted = probabilities[i] >= 0.5 ? 1 : 0;
    correct += predicted == labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double accuracy(const Classifier& classifier, const Matrix& features,
                const LabelColumn& labels) {
  const Vector p = classifier.predict_proba(features);
  return accuracy(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())),
                  labels);
}

double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw ConfigError("auroc: scores and labels disagree in length");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of average ranks (1-based) of the positives.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]]) {
        positive_rank_sum += mean_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw DataError("auroc needs at least one positive and one negative");
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

double privacy_leakage(double c_a, double c_n, double c_r) {
  if (c_n == c_r) {
    throw MetricError("leakage undefined: no-privacy accuracy equals chance");
  }
  return (c_a - c_r) / (c_n - c_r);
}

double utility_performance(double c_a, double c_n, double c_r) {
  if (c_n == c_r) {
    throw MetricError("utility undefined: no-privacy accuracy equals chance");
  }
  return (c_a - c_r) / (c_n - c_r);
}

double tradeoff(double m_p, double m_u, double delta) {
  return m_p / (delta + m_u);
}

}  // namespace harmonize::eval
