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

#include "harmonize/data/standardize.hpp"

#include <cmath>
#include <string>

#include "harmonize/data/view_io.hpp"
#include "harmonize/error.hpp"

namespace harmonize::data {

StandardizeStats fit_standardizer(const Matrix& features) {
  if (features.rows() == 0) throw DataError("cannot standardize zero rows");
  StandardizeStats stats;
  stats.mean = features.colwise().mean().transpose();
  stats.sd.resize(features.cols());
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    const double var =
        (features.col(c).array() - stats.mean(c)).square().mean();
    const double sd = std::sqrt(var);
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      throw DataError("column " + feature_column_name(static_cast<int>(c)) +
                      " has zero variance");
    }
    stats.sd(c) = sd;
  }
  return stats;
}

Matrix apply_standardizer(const StandardizeStats& stats, const Matrix& features) {
  if (features.cols() != stats.dim()) {
    throw ConfigError("standardizer fitted on " + std::to_string(stats.dim()) +
                      " columns applied to " + std::to_string(features.cols()));
  }
  Matrix out = features.rowwise() - stats.mean.transpose();
  out.array().rowwise() /= stats.sd.transpose().array();
  return out;
}

Matrix invert_standardizer(const StandardizeStats& stats,
                           const Matrix& standardized) {
  if (standardized.cols() != stats.dim()) {
    throw ConfigError("standardizer fitted on " + std::to_string(stats.dim()) +
                      " columns inverted on " + std::to_string(standardized.cols()));
  }
  Matrix out = standardized;
  out.array().rowwise() *= stats.sd.transpose().array();
  out.rowwise() += stats.mean.transpose();
  return out;
}

}  // namespace harmonize::data
