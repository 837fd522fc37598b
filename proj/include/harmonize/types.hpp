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

#ifndef HARMONIZE_TYPES_HPP_
#define HARMONIZE_TYPES_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace harmonize {

// Rows are samples, columns are features.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Binary label column, one entry per row, values in {0, 1}.
using LabelColumn = std::vector<std::uint8_t>;

using Rng = std::mt19937_64;

}  // namespace harmonize

#endif  // HARMONIZE_TYPES_HPP_
