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

#ifndef HARMONIZE_DATA_STANDARDIZE_HPP_
#define HARMONIZE_DATA_STANDARDIZE_HPP_

#include "harmonize/types.hpp"

namespace harmonize::data {

// Per-column mean and population standard deviation.
struct StandardizeStats {
  Vector mean;
  Vector sd;

  int dim() const { return static_cast<int>(mean.size()); }
  bool operator==(const StandardizeStats&) const = default;
};

// Throws DataError naming the first zero-variance column (e.g. "f03").
StandardizeStats fit_standardizer(const Matrix& features);
Matrix apply_standardizer(const StandardizeStats& stats, const Matrix& features);
Matrix invert_standardizer(const StandardizeStats& stats,
                           const Matrix& standardized);

}  // namespace harmonize::data

#endif  // HARMONIZE_DATA_STANDARDIZE_HPP_
