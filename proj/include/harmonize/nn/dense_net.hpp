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

#ifndef HARMONIZE_NN_DENSE_NET_HPP_
#define HARMONIZE_NN_DENSE_NET_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "harmonize/types.hpp"

namespace harmonize::nn {

// Tag values are part of the checkpoint format; do not renumber.
enum class Activation : std::uint8_t {
  kIdentity = 0,
  kRelu = 1,
  kSigmoid = 2,
};

std::string_view activation_name(Activation activation);

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
  Activation activation = Activation::kIdentity;

  int input_dim() const { return static_cast<int>(weight.cols()); }
  int output_dim() const { return static_cast<int>(weight.rows()); }

  bool operator==(const DenseLayer& other) const;
};

// A chain of fully connected layers. Construction validates that adjacent
// layer dimensions agree.
class DenseNet {
 public:
  DenseNet() = default;
  explicit DenseNet(std::vector<DenseLayer> layers);

  // Builds a network with layer widths `widths` (input first) and one
  // activation per layer. Weights are drawn uniformly from
  // +-sqrt(6 / (fan_in + fan_out)); biases start at zero.
  static DenseNet initialize(std::span<const int> widths,
                             std::span<const Activation> activations, Rng& rng);

  int input_dim() const;
  int output_dim() const;
  bool empty() const { return layers_.empty(); }

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  std::size_t parameter_count() const;
  bool all_finite() const;

  // Bitwise comparison of every weight and bias.
  bool operator==(const DenseNet& other) const = default;

 private:
  std::vector<DenseLayer> layers_;
};

// Appends the layers of `tail` after those of `head`.
DenseNet concatenate(const DenseNet& head, const DenseNet& tail);

// Per-layer values recorded by forward() and consumed by backward().
struct ForwardCache {
  std::vector<Matrix> inputs;   // input to each layer, b x in
  std::vector<Matrix> outputs;  // post-activation output of each layer
};

// Applies the network to a batch. Throws ConfigError when x has the wrong
// number of columns.
Matrix forward(const DenseNet& net, const Matrix& x,
               ForwardCache* cache = nullptr);

// Parameter-shaped container for gradients and optimizer moments.
struct Gradients {
  std::vector<Matrix> weight;
  std::vector<Vector> bias;

  static Gradients zeros_like(const DenseNet& net);

  Gradients& operator+=(const Gradients& other);
  Gradients& operator*=(double factor);
  bool all_finite() const;
  bool matches(const DenseNet& net) const;
};

struct BackwardResult {
  Gradients params;
  Matrix input_grad;  // d loss / d x, same shape as the forward input
};

// Backpropagates `grad_out` (d loss / d output) through the cached forward
// pass. Throws InternalError when the cache does not belong to `net`.
BackwardResult backward(const DenseNet& net, const ForwardCache& cache,
                        const Matrix& grad_out);

}  // namespace harmonize::nn

#endif  // HARMONIZE_NN_DENSE_NET_HPP_
