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

#ifndef HARMONIZE_EVAL_PROJECTION_HPP_
#define HARMONIZE_EVAL_PROJECTION_HPP_

#include "harmonize/types.hpp"

namespace harmonize::eval {

// Top principal axes of a feature block, for 2-D scatter exports.
struct PcaBasis {
  Vector mean;
  Matrix axes;  // n x components, unit columns, sign fixed so the largest
                // loading of each axis is positive
};

PcaBasis fit_pca(const Matrix& features, int components = 2);
Matrix project(const PcaBasis& basis, const Matrix& features);

}  // namespace harmonize::eval

#endif  // HARMONIZE_EVAL_PROJECTION_HPP_
