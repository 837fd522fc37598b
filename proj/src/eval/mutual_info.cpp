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

#include "harmonize/eval/mutual_info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "harmonize/error.hpp"

namespace harmonize::eval {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// Column-wise average ranks scaled to [0, 1], stored row-major. Ranks sit on
// an exact lattice, so distances tie constantly and "strictly closer than d"
// becomes a matter of rounding; a fixed-seed jitter of at most a quarter rank
// breaks the ties without reordering distinct values.
std::vector<double> rank_normalize(const Matrix& features) {
  Rng jitter_rng(0x6D69);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  const auto rows = static_cast<std::size_t>(features.rows());
  const auto cols = static_cast<std::size_t>(features.cols());
  std::vector<double> out(rows * cols);
  std::vector<std::size_t> order(rows);
  const double scale = rows > 1 ? 1.0 / static_cast<double>(rows - 1) : 1.0;
  for (std::size_t c = 0; c < cols; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return features(static_cast<Eigen::Index>(a), col) <
             features(static_cast<Eigen::Index>(b), col);
    });
    for (std::size_t i = 0; i < rows;) {
      std::size_t j = i;
      const double v = features(static_cast<Eigen::Index>(order[i]), col);
      while (j < rows && features(static_cast<Eigen::Index>(order[j]), col) == v) ++j;
      const double rank = 0.5 * static_cast<double>(i + j - 1);
      for (std::size_t t = i; t < j; ++t) {
        out[order[t] * cols + c] = (rank + jitter(jitter_rng)) * scale;
      }
      i = j;
    }
  }
  return out;
}

}  // namespace

double digamma_int(std::size_t n) {
  if (n == 0) throw InternalError("digamma of zero");
  double h = 0.0;
  for (std::size_t j = 1; j < n; ++j) h += 1.0 / static_cast<double>(j);
  return h - kEulerGamma;
}

double estimate_mi_unclamped(const Matrix& features, const LabelColumn& labels,
                             int neighbors) {
  const auto rows = static_cast<std::size_t>(features.rows());
  if (rows != labels.size()) {
    throw ConfigError("mutual information: features and labels disagree in length");
  }
  if (rows < 100) throw DataError("mutual information needs at least 100 rows");
  if (neighbors < 1) throw ConfigError("neighbour count must be positive");
  if (features.cols() == 0) throw DataError("mutual information of zero features");
  bool degenerate = true;
  for (Eigen::Index r = 1; r < features.rows() && degenerate; ++r) {
    degenerate = features.row(r) == features.row(0);
  }
  if (degenerate) throw DataError("all feature rows are identical");

  const auto cols = static_cast<std::size_t>(features.cols());
  const auto x = rank_normalize(features);

  std::size_t label_card = 0;
  for (auto v : labels) label_card = std::max<std::size_t>(label_card, v + 1u);
  std::vector<std::size_t> class_count(label_card, 0);
  for (auto v : labels) ++class_count[v];

  // Digamma table for every argument we can meet.
  std::vector<double> psi(rows + 1, 0.0);
  psi[1] = -kEulerGamma;
  for (std::size_t j = 2; j <= rows; ++j) psi[j] = psi[j - 1] + 1.0 / static_cast<double>(j - 1);

  std::vector<double> dist(rows);
  std::vector<double> nearest;
  double sum_psi_k = 0.0, sum_psi_ny = 0.0, sum_psi_m = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t ny = class_count[labels[i]];
    if (ny < 2) continue;
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(neighbors), ny - 1);
    const double* xi = &x[i * cols];
    for (std::size_t j = 0; j < rows; ++j) {
      const double* xj = &x[j * cols];
      double d = 0.0;
      for (std::size_t c = 0; c < cols; ++c) d = std::max(d, std::abs(xi[c] - xj[c]));
      dist[j] = d;
    }
    // k smallest same-label distances, excluding the point itself.
    nearest.assign(k, std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < rows; ++j) {
      if (j == i || labels[j] != labels[i] || dist[j] >= nearest.back()) continue;
      auto pos = std::upper_bound(nearest.begin(), nearest.end(), dist[j]);
      nearest.insert(pos, dist[j]);
      nearest.pop_back();
    }
    const double radius = nearest.back();
    std::size_t m = 0;
    for (std::size_t j = 0; j < rows; ++j) m += dist[j] < radius;
    m = std::max<std::size_t>(m, 1);  // the point itself, even when radius is 0
    sum_psi_k += psi[k];
    sum_psi_ny += psi[ny];
    sum_psi_m += psi[m];
    ++used;
  }
  if (used == 0) throw DataError("every label value occurs only once");
  const double n = static_cast<double>(used);
  return psi[used] + (sum_psi_k - sum_psi_ny - sum_psi_m) / n;
}

double estimate_mi(const Matrix& features, const LabelColumn& labels, int neighbors) {
  return std::max(0.0, estimate_mi_unclamped(features, labels, neighbors));
}

}  // namespace harmonize::eval
