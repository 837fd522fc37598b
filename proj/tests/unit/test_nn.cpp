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

#include <cmath>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "harmonize/error.hpp"
#include "harmonize/nn/adam.hpp"
#include "harmonize/nn/checkpoint.hpp"
#include "harmonize/nn/dense_net.hpp"
#include "harmonize/nn/losses.hpp"
#include "support/oracles.hpp"

namespace hz = harmonize;
namespace nn = harmonize::nn;
using hz::Matrix;
using nn::Activation;

namespace {

nn::DenseNet scalar_net(double w, double b, Activation act) {
  nn::DenseLayer layer;
  layer.weight = Matrix::Constant(1, 1, w);
  layer.bias = hz::Vector::Constant(1, b);
  layer.activation = act;
  return nn::DenseNet({layer});
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

}  // namespace

TEST_SUITE("nn") {

TEST_CASE("forward on hand-sized networks") {
  hz::Rng rng(1);
  const std::vector<int> widths = {3, 4, 2};
  const std::vector<Activation> acts = {Activation::kIdentity, Activation::kIdentity};
  auto net = nn::DenseNet::initialize(widths, acts, rng);
  for (auto& layer : net.mutable_layers()) {
    layer.weight.setZero();
    layer.bias.setZero();
  }
  const Matrix x = hz::testing::random_matrix(5, 3, rng);
  CHECK(nn::forward(net, x).isZero(0.0));

  CHECK(nn::forward(scalar_net(2, 1, Activation::kRelu), scalar(-3))(0, 0) == 0.0);
  CHECK(nn::forward(scalar_net(1, 0, Activation::kSigmoid), scalar(0))(0, 0) == 0.5);
}

TEST_CASE("forward rejects a width mismatch") {
  auto net = scalar_net(1, 0, Activation::kIdentity);
  CHECK_THROWS_AS(nn::forward(net, Matrix::Zero(2, 3)), hz::ConfigError);
}

TEST_CASE("backward chain rule on a scalar network") {
  auto net = scalar_net(0.5, 0.0, Activation::kIdentity);
  nn::ForwardCache cache;
  nn::forward(net, scalar(3), &cache);
  const auto g = nn::backward(net, cache, scalar(1));
  CHECK(g.params.weight[0](0, 0) == doctest::Approx(3.0));
  CHECK(g.params.bias[0](0) == doctest::Approx(1.0));

  const auto zero = nn::backward(net, cache, scalar(0));
  CHECK(zero.params.weight[0].isZero(0.0));
  CHECK(zero.params.bias[0].isZero(0.0));
}

TEST_CASE("backward rejects a stale cache") {
  hz::Rng rng(2);
  const std::vector<int> widths = {2, 3, 1};
  const std::vector<Activation> acts = {Activation::kRelu, Activation::kSigmoid};
  auto net = nn::DenseNet::initialize(widths, acts, rng);
  nn::ForwardCache cache;
  nn::forward(net, Matrix::Ones(4, 2), &cache);
  CHECK_THROWS_AS(nn::backward(net, cache, Matrix::Ones(3, 1)), hz::InternalError);
}

TEST_CASE("finite differences: mse through relu stacks") {
  const std::vector<Activation> relu3 = {Activation::kRelu, Activation::kRelu,
                                         Activation::kIdentity};
  CHECK(hz::testing::worst_network_gradient_error({5, 7, 4, 3}, relu3, false, 100, 11) <= 1e-4);
  CHECK(hz::testing::worst_network_gradient_error({3, 6, 6, 5}, relu3, false, 100, 12) <= 1e-4);
}

TEST_CASE("finite differences: bce through sigmoid heads") {
  const std::vector<Activation> head = {Activation::kRelu, Activation::kRelu,
                                        Activation::kSigmoid};
  CHECK(hz::testing::worst_network_gradient_error({5, 6, 4, 1}, head, true, 100, 13) <= 1e-4);
  const std::vector<Activation> logistic = {Activation::kSigmoid};
  CHECK(hz::testing::worst_network_gradient_error({6, 1}, logistic, true, 100, 14) <= 1e-4);
}

TEST_CASE("adam single step and determinism") {
  auto net = scalar_net(0.0, 0.0, Activation::kIdentity);
  nn::AdamState state(net, nn::AdamConfig{.learning_rate = 0.1});
  auto g = nn::Gradients::zeros_like(net);
  g.weight[0](0, 0) = 1.0;
  nn::adam_step(net, g, state);
  CHECK(net.layers()[0].weight(0, 0) == doctest::Approx(-0.1).epsilon(1e-6));
  CHECK(net.layers()[0].bias(0) == 0.0);

  hz::Rng rng(3);
  const std::vector<int> widths = {4, 5, 2};
  const std::vector<Activation> acts = {Activation::kRelu, Activation::kIdentity};
  const auto init = nn::DenseNet::initialize(widths, acts, rng);
  auto still = init;
  nn::AdamState s0(still, {});
  nn::adam_step(still, nn::Gradients::zeros_like(still), s0);
  CHECK(still == init);
  auto a = init, b = init;
  nn::AdamState sa(a, {}), sb(b, {});
  for (int k = 0; k < 10; ++k) {
    nn::ForwardCache cache;
    const Matrix x = hz::testing::random_matrix(3, 4, rng);
    nn::forward(a, x, &cache);
    const auto grads = nn::backward(a, cache, Matrix::Ones(3, 2)).params;
    nn::adam_step(a, grads, sa);
    nn::adam_step(b, grads, sb);
  }
  CHECK(a == b);
}

TEST_CASE("adam refuses non-finite gradients without touching the net") {
  auto net = scalar_net(1.0, 0.0, Activation::kIdentity);
  const auto before = net;
  nn::AdamState state(net, {});
  auto g = nn::Gradients::zeros_like(net);
  g.bias[0](0) = std::nan("");
  CHECK_THROWS_AS(nn::adam_step(net, g, state), hz::InternalError);
  CHECK(net == before);
  CHECK(state.step == 0);
}

TEST_CASE("mse values") {
  const Matrix t = Matrix::Random(3, 2);
  CHECK(nn::mse(t, t).value == 0.0);
  CHECK(nn::mse(Matrix::Ones(1, 2), Matrix::Zero(1, 2)).value == doctest::Approx(1.0));
  const auto r = nn::mse(scalar(2), scalar(0));
  CHECK(r.value == doctest::Approx(4.0));
  CHECK(r.grad(0, 0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(nn::mse(Matrix::Zero(1, 2), Matrix::Zero(2, 1)), hz::ConfigError);
}

TEST_CASE("bce values") {
  const hz::LabelColumn one = {1};
  CHECK(nn::bce(scalar(0.5), one).value == doctest::Approx(std::log(2.0)));
  Matrix p(2, 1);
  p << 0.9, 0.2;
  const hz::LabelColumn y = {1, 0};
  CHECK(nn::bce(p, y).value == doctest::Approx((-std::log(0.9) - std::log(0.8)) / 2));
  CHECK(nn::bce(p, y).value == doctest::Approx(0.1643).epsilon(1e-3));
  Matrix exact(2, 1);
  exact << 1.0, 0.0;
  const double v = nn::bce(exact, y).value;
  CHECK(v <= -std::log(1 - nn::kProbabilityEpsilon) + 1e-15);
  CHECK(std::isfinite(nn::bce(exact, hz::LabelColumn{0, 1}).value));
}

TEST_CASE("checkpoint round trip is bitwise") {
  hz::Rng rng(4);
  const std::vector<int> widths = {16, 32, 16, 1};
  const std::vector<Activation> acts = {Activation::kRelu, Activation::kRelu,
                                        Activation::kSigmoid};
  const auto net = hz::testing::random_net(widths, acts, rng);
  const auto bytes = nn::encode_checkpoint(net);
  CHECK(bytes.substr(0, 4) == "HZNN");
  CHECK(nn::decode_checkpoint(bytes) == net);

  const auto path = std::filesystem::temp_directory_path() / "harmonize_ckpt_test.hznn";
  nn::save_checkpoint(path, net);
  CHECK(nn::load_checkpoint(path) == net);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(nn::decode_checkpoint(bytes.substr(0, bytes.size() - 1)), hz::DataError);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(nn::decode_checkpoint(bad), hz::DataError);
}

}  // TEST_SUITE
