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

#include "harmonize/nn/dense_net.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "harmonize/error.hpp"

namespace harmonize::nn {

namespace {

bool same_bits(const double* a, const double* b, Eigen::Index count) {
  return count == 0 ||
         std::memcmp(a, b, static_cast<std::size_t>(count) * sizeof(double)) ==
             0;
}

void apply_activation(Activation activation, Matrix& z) {
  switch (activation) {
    case Activation::kIdentity:
      break;
    case Activation::kRelu:
      z = z.cwiseMax(0.0);
      break;
    case Activation::kSigmoid:
      z = z.unaryExpr([](double v) {
        // Split on sign so exp never overflows.
        if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      });
      break;
  }
}

// Multiplies the upstream gradient by the activation derivative, expressed in
// terms of the post-activation output.
Matrix activation_backward(Activation activation, const Matrix& output,
                           const Matrix& grad) {
  switch (activation) {
    case Activation::kIdentity:
      return grad;
    case Activation::kRelu:
      return (output.array() > 0.0).select(grad, 0.0);
    case Activation::kSigmoid:
      return grad.array() * output.array() * (1.0 - output.array());
  }
  throw InternalError("unknown activation");
}

}  // namespace

std::string_view activation_name(Activation activation) {
  switch (activation) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kRelu:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
  }
  return "unknown";
}

bool DenseLayer::operator==(const DenseLayer& other) const {
  return activation == other.activation && weight.rows() == other.weight.rows() &&
         weight.cols() == other.weight.cols() &&
         bias.size() == other.bias.size() &&
         same_bits(weight.data(), other.weight.data(), weight.size()) &&
         same_bits(bias.data(), other.bias.data(), bias.size());
}

DenseNet::DenseNet(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& layer = layers_[i];
    if (layer.weight.rows() == 0 || layer.weight.cols() == 0) {
      throw ConfigError("layer " + std::to_string(i) + " has an empty weight");
    }
    if (layer.bias.size() != layer.weight.rows()) {
      throw ConfigError("layer " + std::to_string(i) +
                        " bias length does not match its output dimension");
    }
    if (i > 0 && layers_[i - 1].output_dim() != layer.input_dim()) {
      throw ConfigError("layer " + std::to_string(i) + " expects " +
                        std::to_string(layer.input_dim()) +
                        " inputs but the previous layer emits " +
                        std::to_string(layers_[i - 1].output_dim()));
    }
  }
}

DenseNet DenseNet::initialize(std::span<const int> widths,
                              std::span<const Activation> activations,
                              Rng& rng) {
  if (widths.size() < 2 || activations.size() + 1 != widths.size()) {
    throw ConfigError("need one activation per layer and at least one layer");
  }
  std::vector<DenseLayer> layers;
  layers.reserve(activations.size());
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const int fan_in = widths[i];
    const int fan_out = widths[i + 1];
    if (fan_in <= 0 || fan_out <= 0) {
      throw ConfigError("layer widths must be positive");
    }
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-limit, limit);
    DenseLayer layer;
    layer.weight.resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        layer.weight(r, c) = uniform(rng);
      }
    }
    layer.bias = Vector::Zero(fan_out);
    layer.activation = activations[i];
    layers.push_back(std::move(layer));
  }
  return DenseNet(std::move(layers));
}

int DenseNet::input_dim() const {
  return layers_.empty() ? 0 : layers_.front().input_dim();
}

int DenseNet::output_dim() const {
  return layers_.empty() ? 0 : layers_.back().output_dim();
}

std::size_t DenseNet::parameter_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers_) {
    count += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  }
  return count;
}

bool DenseNet::all_finite() const {
  for (const auto& layer : layers_) {
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
  }
  return true;
}

DenseNet concatenate(const DenseNet& head, const DenseNet& tail) {
  std::vector<DenseLayer> layers = head.layers();
  layers.insert(layers.end(), tail.layers().begin(), tail.layers().end());
  return DenseNet(std::move(layers));
}

Matrix forward(const DenseNet& net, const Matrix& x, ForwardCache* cache) {
  if (net.empty()) throw ConfigError("forward on an empty network");
  if (x.cols() != net.input_dim()) {
    throw ConfigError("network expects " + std::to_string(net.input_dim()) +
                      " input columns, got " + std::to_string(x.cols()));
  }
  if (cache != nullptr) {
    cache->inputs.clear();
    cache->outputs.clear();
    cache->inputs.reserve(net.layers().size());
    cache->outputs.reserve(net.layers().size());
  }
  Matrix current = x;
  for (const auto& layer : net.layers()) {
    Matrix z = current * layer.weight.transpose();
    z.rowwise() += layer.bias.transpose();
    apply_activation(layer.activation, z);
    if (cache != nullptr) {
      cache->inputs.push_back(std::move(current));
      cache->outputs.push_back(z);
    }
    current = std::move(z);
  }
  return current;
}

Gradients Gradients::zeros_like(const DenseNet& net) {
  Gradients grads;
  for (const auto& layer : net.layers()) {
    grads.weight.push_back(Matrix::Zero(layer.weight.rows(), layer.weight.cols()));
    grads.bias.push_back(Vector::Zero(layer.bias.size()));
  }
  return grads;
}

Gradients& Gradients::operator+=(const Gradients& other) {
  if (other.weight.size() != weight.size()) {
    throw InternalError("adding gradients of different networks");
  }
  for (std::size_t i = 0; i < weight.size(); ++i) {
    weight[i] += other.weight[i];
    bias[i] += other.bias[i];
  }
  return *this;
}

Gradients& Gradients::operator*=(double factor) {
  for (std::size_t i = 0; i < weight.size(); ++i) {
    weight[i] *= factor;
    bias[i] *= factor;
  }
  return *this;
}

bool Gradients::all_finite() const {
  for (std::size_t i = 0; i < weight.size(); ++i) {
    if (!weight[i].allFinite() || !bias[i].allFinite()) return false;
  }
  return true;
}

bool Gradients::matches(const DenseNet& net) const {
  const auto& layers = net.layers();
  if (weight.size() != layers.size() || bias.size() != layers.size()) {
    return false;
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (weight[i].rows() != layers[i].weight.rows() ||
        weight[i].cols() != layers[i].weight.cols() ||
        bias[i].size() != layers[i].bias.size()) {
      return false;
    }
  }
  return true;
}

BackwardResult backward(const DenseNet& net, const ForwardCache& cache,
                        const Matrix& grad_out) {
  const auto& layers = net.layers();
  if (cache.inputs.size() != layers.size() ||
      cache.outputs.size() != layers.size()) {
    throw InternalError("forward cache does not match the network depth");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (cache.inputs[i].cols() != layers[i].input_dim() ||
        cache.outputs[i].cols() != layers[i].output_dim() ||
        cache.outputs[i].rows() != cache.inputs[i].rows()) {
      throw InternalError("stale forward cache at layer " + std::to_string(i));
    }
  }
  if (grad_out.rows() != cache.outputs.back().rows() ||
      grad_out.cols() != cache.outputs.back().cols()) {
    throw InternalError("output gradient shape does not match forward output");
  }

  BackwardResult result;
  result.params.weight.resize(layers.size());
  result.params.bias.resize(layers.size());
  Matrix upstream = grad_out;
  for (std::size_t idx = layers.size(); idx-- > 0;) {
    const auto& layer = layers[idx];
    const Matrix delta =
        activation_backward(layer.activation, cache.outputs[idx], upstream);
    result.params.weight[idx] = delta.transpose() * cache.inputs[idx];
    result.params.bias[idx] = delta.colwise().sum().transpose();
    upstream = delta * layer.weight;
  }
  result.input_grad = std::move(upstream);
  return result;
}

}  // namespace harmonize::nn
