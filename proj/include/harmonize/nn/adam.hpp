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

#ifndef HARMONIZE_NN_ADAM_HPP_
#define HARMONIZE_NN_ADAM_HPP_

#include <cstdint>

#include "harmonize/nn/dense_net.hpp"

namespace harmonize::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second moment accumulators shaped like the network they optimize.
struct AdamState {
  AdamState() = default;
  AdamState(const DenseNet& net, AdamConfig config);

  AdamConfig config;
  Gradients first_moment;
  Gradients second_moment;
  std::uint64_t step = 0;

  bool operator==(const AdamState& other) const;
};

// One bias-corrected Adam update, in place. NaN/Inf gradients or shape
// mismatches raise InternalError and leave net and state untouched.
void adam_step(DenseNet& net, const Gradients& grads, AdamState& state);

}  // namespace harmonize::nn

#endif  // HARMONIZE_NN_ADAM_HPP_
