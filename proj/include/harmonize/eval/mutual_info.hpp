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

#ifndef HARMONIZE_EVAL_MUTUAL_INFO_HPP_
#define HARMONIZE_EVAL_MUTUAL_INFO_HPP_

#include "harmonize/types.hpp"

namespace harmonize::eval {

// Nearest-neighbour estimate (in nats) of I(X; Y) between continuous feature
// vectors and a discrete label. Each feature column is first replaced by its
// normalized average rank; distances use the max-norm. For every point the
// distance d to its k-th nearest same-label neighbour is found and m counts
// the points (itself included) strictly closer than d over the whole sample:
//
//   I = psi(N) + <psi(k)> - <psi(N_y)> - <psi(m)>
//
// Labels that occur once are dropped. Needs at least 100 rows; throws
// DataError for fewer rows or when all feature rows are identical.
double estimate_mi_unclamped(const Matrix& features, const LabelColumn& labels,
                             int neighbors = 3);

// max(0, estimate_mi_unclamped(...)).
double estimate_mi(const Matrix& features, const LabelColumn& labels,
                   int neighbors = 3);

// psi(n) for a positive integer n.
double digamma_int(std::size_t n);

}  // namespace harmonize::eval

#endif  // HARMONIZE_EVAL_MUTUAL_INFO_HPP_
