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

#include "harmonize/nn/adam.hpp"

#include <cmath>

#include "harmonize/error.hpp"

namespace harmonize::nn {

AdamState::AdamState(const DenseNet& net, AdamConfig config)
    : config(config),
      first_moment(Gradients::zeros_like(net)),
      second_moment(Gradients::zeros_like(net)) {}

bool AdamState::operator==(const AdamState& other) const {
  auto same = [](const Gradients& a, const Gradients& b) {
    if (a.weight.size() != b.weight.size()) return false;
    for (std::size_t i = 0; i < a.weight.size(); ++i) {
      if (a.weight[i] != b.weight[i] || a.bias[i] != b.bias[i]) return false;
    }
    return true;
  };
  return step == other.step &&
         config.learning_rate == other.config.learning_rate &&
         same(first_moment, other.first_moment) &&
         same(second_moment, other.second_moment);
}

void adam_step(DenseNet& net, const Gradients& grads, AdamState& state) {
  if (!grads.matches(net) || !state.first_moment.matches(net) ||
      !state.second_moment.matches(net)) {
    throw InternalError("gradients or optimizer state do not match network");
  }
  if (!grads.all_finite()) {
    throw InternalError("non-finite gradient passed to adam_step");
  }
  const auto& cfg = state.config;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);

  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseAbs2();
    param.array() -= cfg.learning_rate * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + cfg.epsilon);
  };

  auto& layers = net.mutable_layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    update(layers[i].weight, grads.weight[i], state.first_moment.weight[i],
           state.second_moment.weight[i]);
    update(layers[i].bias, grads.bias[i], state.first_moment.bias[i],
           state.second_moment.bias[i]);
  }
}

}  // namespace harmonize::nn
