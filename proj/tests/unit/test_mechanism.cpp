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

#include <filesystem>
#include <random>
#include <span>

#include "doctest.h"
#include "harmonize/error.hpp"
#include "harmonize/eval/classifier.hpp"
#include "harmonize/eval/metrics.hpp"
#include "harmonize/mechanism/mechanism.hpp"
#include "harmonize/mechanism/persist.hpp"
#include "harmonize/seeds.hpp"
#include "harmonize/text.hpp"
#include "support/oracles.hpp"

namespace hz = harmonize;
namespace mech = harmonize::mechanism;
using hz::Matrix;
using mech::Variant;

namespace {

mech::TrainSettings small_settings() {
  mech::TrainSettings s;
  s.architecture.encoder_hidden = {6};
  s.architecture.bottleneck = 3;
  s.architecture.decoder_hidden = {6};
  s.architecture.head_hidden = {5};
  s.batch_size = 16;
  s.epochs = 2;
  return s;
}

mech::Batch random_batch(int rows, int dim, hz::Rng& rng) {
  return {hz::testing::random_matrix(rows, dim, rng),
          hz::testing::random_labels(static_cast<std::size_t>(rows), rng),
          hz::testing::random_labels(static_cast<std::size_t>(rows), rng)};
}

// Encoder and decoder are single identity layers with identity weights.
mech::MechanismState identity_mechanism(Variant variant, int dim, double noise_sd) {
  mech::TrainSettings s = small_settings();
  s.architecture.bottleneck = dim;
  hz::Rng rng(0);
  auto state = mech::MechanismState::initialize(variant, dim, s, rng);
  hz::nn::DenseLayer layer;
  layer.weight = Matrix::Identity(dim, dim);
  layer.bias = hz::Vector::Zero(dim);
  state.encoder = hz::nn::DenseNet({layer});
  state.decoder = hz::nn::DenseNet({layer});
  state.noise_sd = noise_sd;
  state.standardizer.mean = hz::Vector::Zero(dim);
  state.standardizer.sd = hz::Vector::Ones(dim);
  return state;
}

struct ToyData {
  Matrix x;
  hz::LabelColumn p, u;
};

// Two standardized features: x0 carries the private label, x1 the utility
// label, both linearly separable with a margin.
ToyData toy_data(std::size_t rows, hz::Rng& rng) {
  ToyData d;
  d.x.resize(static_cast<Eigen::Index>(rows), 2);
  d.p = hz::testing::random_labels(rows, rng);
  d.u = hz::testing::random_labels(rows, rng);
  std::uniform_real_distribution<double> u(0.3, 1.5);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    d.x(r, 0) = (d.p[i] ? 1 : -1) * u(rng);
    d.x(r, 1) = (d.u[i] ? 1 : -1) * u(rng);
  }
  return d;
}

struct ToyOutcome {
  double adversary = 0.0;
  double utility = 0.0;
};

// 2,000 alternating steps on the toy set, then the trained heads scored on
// held-out rows pushed through the frozen generator.
ToyOutcome run_toy(Variant variant) {
  hz::Rng rng(21);
  const auto train = toy_data(2000, rng);
  const auto test = toy_data(2000, rng);
  mech::TrainSettings s;
  s.architecture.encoder_hidden = {16};
  s.architecture.bottleneck = 2;
  s.architecture.decoder_hidden = {16};
  s.architecture.head_hidden = {16};
  s.lambda_p = 3.0;
  auto state = mech::MechanismState::initialize(variant, 2, s, rng);
  state.standardizer.mean = hz::Vector::Zero(2);
  state.standardizer.sd = hz::Vector::Ones(2);
  std::uniform_int_distribution<std::size_t> pick(0, 1999);
  mech::Batch batch{Matrix(64, 2), hz::LabelColumn(64), hz::LabelColumn(64)};
  for (int step = 0; step < 2000; ++step) {
    for (int i = 0; i < 64; ++i) {
      const auto j = pick(rng);
      batch.features.row(i) = train.x.row(static_cast<Eigen::Index>(j));
      batch.private_labels[i] = train.p[j];
      batch.utility_labels[i] = train.u[j];
    }
    mech::train_step(state, batch, s, rng);
  }
  const Matrix released = mech::sanitize(state, test.x, 2);
  auto score = [&](const hz::nn::DenseNet& head, const hz::LabelColumn& y) {
    const Matrix p = hz::nn::forward(head, released);
    return hz::eval::accuracy(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())), y);
  };
  return {score(state.private_head, test.p), score(state.utility_head, test.u)};
}

}  // namespace

TEST_SUITE("mechanism") {

TEST_CASE("composite loss weights") {
  mech::TrainSettings s;
  const auto loss = mech::LossBreakdown::compose(0.4, 0.7, 0.6, s);
  CHECK(loss.total == doctest::Approx(0.86));
  s.lambda_p = 0;
  s.lambda_u = 0;
  CHECK(mech::LossBreakdown::compose(0.4, 0.7, 0.6, s).total == doctest::Approx(0.4));
  CHECK(mech::LossBreakdown::compose(0, 0, 0, mech::TrainSettings{}).total == 0.0);
}

TEST_CASE("settings validation") {
  mech::TrainSettings s;
  s.lambda_p = -1;
  CHECK_THROWS_AS(s.validate(), hz::ConfigError);
  s = {};
  s.alpha = 0;
  s.lambda_u = 0;
  CHECK_THROWS_AS(s.validate(), hz::ConfigError);
  s = {};
  s.batch_size = 0;
  CHECK_THROWS_AS(s.validate(), hz::ConfigError);
  CHECK(mech::parse_variant("alfr") == Variant::kAlfr);
  CHECK(mech::parse_variant("uae-pupet") == Variant::kUaePupet);
  CHECK_THROWS_AS(mech::parse_variant("gan"), hz::ConfigError);
}

TEST_CASE("finite differences: composite loss, both variants") {
  for (auto variant : {Variant::kAlfr, Variant::kUaePupet}) {
    CHECK(hz::testing::worst_mechanism_gradient_error(variant, small_settings(), 5, 100, 31) <= 1e-4);
  }
  auto s = small_settings();
  s.alpha = 0.5;
  s.lambda_p = 1.3;
  s.lambda_u = 0.7;
  s.noise_sd = 0.4;
  CHECK(hz::testing::worst_mechanism_gradient_error(Variant::kUaePupet, s, 4, 100, 32) <= 1e-4);
}

TEST_CASE("update partition") {
  hz::Rng rng(41);
  const auto s = small_settings();
  const auto batch = random_batch(12, 5, rng);
  for (auto variant : {Variant::kAlfr, Variant::kUaePupet}) {
    auto state = mech::MechanismState::initialize(variant, 5, s, rng);
    REQUIRE(state.phase_u);
    auto before = state;
    mech::train_step(state, batch, s, rng);
    CHECK_FALSE(state.phase_u);
    if (variant == Variant::kAlfr) {
      // U: adversary ascent only.
      CHECK(state.encoder == before.encoder);
      CHECK(state.decoder == before.decoder);
      CHECK(state.utility_head == before.utility_head);
      CHECK_FALSE(state.private_head == before.private_head);
    } else {
      // U: generator only.
      CHECK(state.private_head == before.private_head);
      CHECK(state.utility_head == before.utility_head);
      CHECK_FALSE(state.encoder == before.encoder);
      CHECK_FALSE(state.decoder == before.decoder);
    }
    before = state;
    mech::train_step(state, batch, s, rng);
    CHECK(state.phase_u);
    if (variant == Variant::kAlfr) {
      CHECK(state.private_head == before.private_head);
      CHECK_FALSE(state.encoder == before.encoder);
      CHECK_FALSE(state.utility_head == before.utility_head);
    } else {
      CHECK(state.encoder == before.encoder);
      CHECK(state.decoder == before.decoder);
      CHECK_FALSE(state.private_head == before.private_head);
      CHECK_FALSE(state.utility_head == before.utility_head);
    }
  }
}

TEST_CASE("alfr adversary step ascends the composite loss") {
  hz::Rng rng(42);
  auto s = small_settings();
  s.learning_rate = 1e-3;
  const auto batch = random_batch(32, 5, rng);
  auto state = mech::MechanismState::initialize(Variant::kAlfr, 5, s, rng);
  const auto before = mech::compute_gradients(state, batch, s, nullptr, false).loss;
  mech::alfr_step(state, batch, s, rng);
  const auto after = mech::compute_gradients(state, batch, s, nullptr, false).loss;
  CHECK(after.total > before.total);
  CHECK(after.private_loss < before.private_loss);
}

TEST_CASE("step kind must match the variant") {
  hz::Rng rng(43);
  const auto s = small_settings();
  const auto batch = random_batch(8, 5, rng);
  auto alfr = mech::MechanismState::initialize(Variant::kAlfr, 5, s, rng);
  auto uae = mech::MechanismState::initialize(Variant::kUaePupet, 5, s, rng);
  CHECK_THROWS_AS(mech::pupet_step(alfr, batch, s, rng), hz::ConfigError);
  CHECK_THROWS_AS(mech::alfr_step(uae, batch, s, rng), hz::ConfigError);
}

TEST_CASE("noiseless UAE generator matches ALFR") {
  hz::Rng rng(44);
  auto s = small_settings();
  s.noise_sd = 0.0;
  const auto state = mech::MechanismState::initialize(Variant::kUaePupet, 5, s, rng);
  auto alfr = state;
  alfr.variant = Variant::kAlfr;
  const Matrix x = hz::testing::random_matrix(10, 5, rng);
  hz::Rng r1(1), r2(2);
  CHECK(mech::generator_apply(state, x, mech::Mode::kTrain, r1) ==
        mech::generator_apply(alfr, x, mech::Mode::kTrain, r2));
}

TEST_CASE("identity toy generator passes data through") {
  hz::Rng rng(45);
  const Matrix x = hz::testing::random_matrix(20, 4, rng);
  const auto alfr = identity_mechanism(Variant::kAlfr, 4, 0.1);
  CHECK(mech::generator_apply(alfr, x, mech::Mode::kSanitize, rng) == x);
  CHECK(mech::sanitize(alfr, x, 0) == x);

  const auto uae = identity_mechanism(Variant::kUaePupet, 4, 0.1);
  const Matrix a = mech::sanitize(uae, x, 7);
  CHECK(a == mech::sanitize(uae, x, 7));
  CHECK_FALSE(a == mech::sanitize(uae, x, 8));
  CHECK(a.rows() == 20);
  CHECK(a.cols() == 4);
  CHECK((a - x).cwiseAbs().maxCoeff() < 1.0);
  CHECK_THROWS_AS(mech::sanitize(uae, Matrix::Zero(3, 5), 0), hz::ConfigError);
}

TEST_CASE("train_mechanism bookkeeping") {
  hz::Rng rng(46);
  auto s = small_settings();
  s.epochs = 0;
  const Matrix x = hz::testing::random_matrix(100, 5, rng);
  const auto p = hz::testing::random_labels(100, rng);
  const auto u = hz::testing::random_labels(100, rng);
  const auto zero = mech::train_mechanism(x, p, u, s, Variant::kUaePupet);
  hz::Rng init_rng(hz::derive_seed(s.seed, {1}));
  const auto fresh = mech::MechanismState::initialize(Variant::kUaePupet, 5, s, init_rng);
  CHECK(zero.state.encoder == fresh.encoder);
  CHECK(zero.state.decoder == fresh.decoder);
  CHECK(zero.state.private_head == fresh.private_head);
  CHECK(zero.trace.epochs.empty());

  s.epochs = 3;
  const auto trained = mech::train_mechanism(x, p, u, s, Variant::kAlfr);
  CHECK(trained.trace.epochs.size() == 3);
  const auto again = mech::train_mechanism(x, p, u, s, Variant::kAlfr);
  CHECK(trained.state.encoder == again.state.encoder);
  CHECK_THROWS_AS(mech::train_mechanism(Matrix(0, 5), {}, {}, s, Variant::kAlfr), hz::ConfigError);
}

TEST_CASE("reconstruction improves with training") {
  hz::Rng rng(47);
  mech::TrainSettings s;
  s.epochs = 20;
  const Matrix x = hz::testing::random_matrix(2000, 16, rng);
  const auto p = hz::testing::random_labels(2000, rng);
  const auto u = hz::testing::random_labels(2000, rng);
  const auto trained = mech::train_mechanism(x, p, u, s, Variant::kUaePupet);
  CHECK(trained.trace.epochs.back().reconstruction < trained.trace.initial.reconstruction);
}

TEST_CASE("non-finite training input raises a training error") {
  hz::Rng rng(48);
  auto s = small_settings();
  auto state = mech::MechanismState::initialize(Variant::kUaePupet, 5, s, rng);
  auto batch = random_batch(8, 5, rng);
  batch.features(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(mech::train_step(state, batch, s, rng), hz::TrainingError);
}

TEST_CASE("toy separation: alfr") {
  const auto r = run_toy(Variant::kAlfr);
  MESSAGE("alfr adversary " << r.adversary << " utility " << r.utility);
  CHECK(r.adversary <= 0.6);
  CHECK(r.utility >= 0.9);
}

TEST_CASE("toy separation: uae-pupet") {
  const auto r = run_toy(Variant::kUaePupet);
  MESSAGE("uae-pupet adversary " << r.adversary << " utility " << r.utility);
  CHECK(r.adversary <= 0.6);
  CHECK(r.utility >= 0.9);
}

TEST_CASE("mechanism directory round trip") {
  hz::Rng rng(49);
  auto s = small_settings();
  s.epochs = 1;
  const Matrix x = hz::testing::random_matrix(64, 5, rng);
  const auto p = hz::testing::random_labels(64, rng);
  const auto u = hz::testing::random_labels(64, rng);
  mech::MechanismRecord rec{mech::train_mechanism(x, p, u, s, Variant::kUaePupet).state, s,
                            std::string(64, 'a'), 2};
  const auto dir = std::filesystem::temp_directory_path() / "harmonize_mech_rt";
  std::filesystem::remove_all(dir);
  mech::save_mechanism(dir, rec);
  const auto back = mech::load_mechanism(dir);
  CHECK(back.state.encoder == rec.state.encoder);
  CHECK(back.state.decoder == rec.state.decoder);
  CHECK(back.state.private_head == rec.state.private_head);
  CHECK(back.state.utility_head == rec.state.utility_head);
  CHECK(back.state.standardizer == rec.state.standardizer);
  CHECK(back.iteration == 2);
  CHECK(back.training_data_sha256 == rec.training_data_sha256);
  CHECK(mech::encode_manifest(back) == mech::encode_manifest(rec));
  CHECK(mech::sanitize(back.state, x, 5) == mech::sanitize(rec.state, x, 5));

  hz::write_file(dir / "manifest.txt", "variant=alfr\nbottleneck=oops\n");
  CHECK_THROWS_AS(mech::load_mechanism(dir), hz::DataError);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
