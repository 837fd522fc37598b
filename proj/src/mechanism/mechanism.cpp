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

#include "harmonize/mechanism/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "harmonize/error.hpp"
#include "harmonize/nn/losses.hpp"
#include "harmonize/seeds.hpp"

namespace harmonize::mechanism {

namespace {

using nn::Activation;

std::vector<int> widths(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> w;
  w.push_back(in);
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(out);
  return w;
}

nn::DenseNet make_net(int in, const std::vector<int>& hidden, int out,
                      Activation last, Rng& rng) {
  const auto w = widths(in, hidden, out);
  std::vector<Activation> acts(w.size() - 1, Activation::kRelu);
  acts.back() = last;
  return nn::DenseNet::initialize(w, acts, rng);
}

nn::DenseNet make_head(int input_dim, const TrainSettings& settings, Rng& rng) {
  return make_net(input_dim, settings.architecture.head_hidden, 1,
                  Activation::kSigmoid, rng);
}

Matrix draw_noise(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) z(r, c) = normal(rng);
  }
  return z;
}

double effective_noise(const MechanismState& state) {
  return state.variant == Variant::kUaePupet ? state.noise_sd : 0.0;
}

// Noise draw for one pass; empty when the pass is noiseless.
Matrix maybe_noise(const MechanismState& state, Eigen::Index rows, Rng& rng) {
  if (effective_noise(state) == 0.0) return Matrix();
  return draw_noise(rows, state.bottleneck_dim(), rng);
}

void check_finite(const LossBreakdown& loss, std::uint64_t step) {
  if (!std::isfinite(loss.total) || !std::isfinite(loss.reconstruction) ||
      !std::isfinite(loss.private_loss) || !std::isfinite(loss.utility_loss)) {
    throw TrainingError("non-finite loss at training step " + std::to_string(step) +
                        " (C=" + std::to_string(loss.reconstruction) +
                        ", l_p=" + std::to_string(loss.private_loss) +
                        ", l_u=" + std::to_string(loss.utility_loss) + ")");
  }
}

void finish_step(MechanismState& state) {
  state.phase_u = !state.phase_u;
  state.steps += 1;
}

}  // namespace

std::string_view variant_name(Variant variant) {
  return variant == Variant::kAlfr ? "alfr" : "uae-pupet";
}

Variant parse_variant(std::string_view name) {
  if (name == "alfr") return Variant::kAlfr;
  if (name == "uae-pupet" || name == "uae_pupet" || name == "pupet") {
    return Variant::kUaePupet;
  }
  throw ConfigError("unknown variant '" + std::string(name) +
                    "' (expected alfr or uae-pupet)");
}

void TrainSettings::validate() const {
  if (alpha < 0 || lambda_p < 0 || lambda_u < 0) {
    throw ConfigError("loss weights must be non-negative");
  }
  if (!(alpha > 0 || lambda_u > 0)) {
    throw ConfigError("at least one of alpha and lambda_u must be positive");
  }
  if (noise_sd < 0) throw ConfigError("noise sd must be non-negative");
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (batch_size <= 0) throw ConfigError("batch size must be positive");
  if (!(learning_rate > 0)) throw ConfigError("learning rate must be positive");
  if (architecture.bottleneck <= 0) throw ConfigError("bottleneck must be positive");
}

LossBreakdown LossBreakdown::compose(double reconstruction, double private_loss,
                                     double utility_loss,
                                     const TrainSettings& settings) {
  LossBreakdown loss;
  loss.reconstruction = reconstruction;
  loss.private_loss = private_loss;
  loss.utility_loss = utility_loss;
  loss.total = settings.alpha * reconstruction - settings.lambda_p * private_loss +
               settings.lambda_u * utility_loss;
  return loss;
}

void Batch::validate() const {
  const auto b = static_cast<Eigen::Index>(private_labels.size());
  if (b == 0) throw ConfigError("empty batch");
  if (features.rows() != b || utility_labels.size() != private_labels.size()) {
    throw ConfigError("batch arrays do not share a leading dimension");
  }
}

MechanismState MechanismState::initialize(Variant variant, int input_dim,
                                          const TrainSettings& settings, Rng& rng) {
  settings.validate();
  if (input_dim <= 0) throw ConfigError("input dimension must be positive");
  const auto& arch = settings.architecture;
  MechanismState state;
  state.variant = variant;
  state.noise_sd = settings.noise_sd;
  state.encoder = make_net(input_dim, arch.encoder_hidden, arch.bottleneck,
                           Activation::kIdentity, rng);
  state.decoder = make_net(arch.bottleneck, arch.decoder_hidden, input_dim,
                           Activation::kIdentity, rng);
  state.private_head = make_head(input_dim, settings, rng);
  state.utility_head = make_head(input_dim, settings, rng);
  state.reset_optimizers(settings);
  return state;
}

void MechanismState::reset_heads(const TrainSettings& settings, Rng& rng) {
  private_head = make_head(input_dim(), settings, rng);
  utility_head = make_head(input_dim(), settings, rng);
  const nn::AdamConfig config{.learning_rate = settings.learning_rate};
  private_opt = nn::AdamState(private_head, config);
  utility_opt = nn::AdamState(utility_head, config);
}

void MechanismState::reset_optimizers(const TrainSettings& settings) {
  const nn::AdamConfig config{.learning_rate = settings.learning_rate};
  encoder_opt = nn::AdamState(encoder, config);
  decoder_opt = nn::AdamState(decoder, config);
  private_opt = nn::AdamState(private_head, config);
  utility_opt = nn::AdamState(utility_head, config);
}

void MechanismState::validate() const {
  if (encoder.empty() || decoder.empty() || private_head.empty() ||
      utility_head.empty()) {
    throw ConfigError("mechanism has an empty network");
  }
  if (encoder.output_dim() != decoder.input_dim()) {
    throw ConfigError("encoder output does not match decoder input");
  }
  if (decoder.output_dim() != encoder.input_dim()) {
    throw ConfigError("decoder does not reconstruct the input dimension");
  }
  for (const auto* head : {&private_head, &utility_head}) {
    if (head->input_dim() != encoder.input_dim() || head->output_dim() != 1) {
      throw ConfigError("heads must map sanitized features to one probability");
    }
  }
}

Matrix generator_apply(const MechanismState& state, const Matrix& x, Mode,
                       Rng& rng) {
  Matrix code = nn::forward(state.encoder, x);
  const double eta = effective_noise(state);
  if (eta != 0.0) code += eta * draw_noise(code.rows(), code.cols(), rng);
  return nn::forward(state.decoder, code);
}

MechanismGradients compute_gradients(const MechanismState& state,
                                     const Batch& batch,
                                     const TrainSettings& settings,
                                     const Matrix* bottleneck_noise,
                                     bool with_generator) {
  batch.validate();
  nn::ForwardCache enc_cache, dec_cache, p_cache, u_cache;
  Matrix code = nn::forward(state.encoder, batch.features, &enc_cache);
  const double eta = effective_noise(state);
  if (bottleneck_noise != nullptr && eta != 0.0) {
    if (bottleneck_noise->rows() != code.rows() ||
        bottleneck_noise->cols() != code.cols()) {
      throw InternalError("bottleneck noise has the wrong shape");
    }
    code += eta * *bottleneck_noise;
  }
  const Matrix x_hat = nn::forward(state.decoder, code, &dec_cache);
  const Matrix p_prob = nn::forward(state.private_head, x_hat, &p_cache);
  const Matrix u_prob = nn::forward(state.utility_head, x_hat, &u_cache);

  const auto recon = nn::mse(x_hat, batch.features);
  const auto lp = nn::bce(p_prob, batch.private_labels);
  const auto lu = nn::bce(u_prob, batch.utility_labels);

  MechanismGradients grads;
  grads.loss = LossBreakdown::compose(recon.value, lp.value, lu.value, settings);
  auto p_back = nn::backward(state.private_head, p_cache, lp.grad);
  auto u_back = nn::backward(state.utility_head, u_cache, lu.grad);
  grads.private_head = std::move(p_back.params);
  grads.utility_head = std::move(u_back.params);

  if (with_generator) {
    const Matrix d_xhat = settings.alpha * recon.grad -
                          settings.lambda_p * p_back.input_grad +
                          settings.lambda_u * u_back.input_grad;
    auto dec_back = nn::backward(state.decoder, dec_cache, d_xhat);
    // Additive noise passes the code gradient through unchanged.
    auto enc_back = nn::backward(state.encoder, enc_cache, dec_back.input_grad);
    grads.decoder = std::move(dec_back.params);
    grads.encoder = std::move(enc_back.params);
  }
  return grads;
}

LossBreakdown composite_loss(const MechanismState& state, const Batch& batch,
                             const TrainSettings& settings, Rng& rng) {
  batch.validate();
  const Matrix x_hat = generator_apply(state, batch.features, Mode::kTrain, rng);
  const auto recon = nn::mse(x_hat, batch.features);
  const auto lp = nn::bce(nn::forward(state.private_head, x_hat), batch.private_labels);
  const auto lu = nn::bce(nn::forward(state.utility_head, x_hat), batch.utility_labels);
  return LossBreakdown::compose(recon.value, lp.value, lu.value, settings);
}

LossBreakdown alfr_step(MechanismState& state, const Batch& batch,
                        const TrainSettings& settings, Rng& rng) {
  if (state.variant != Variant::kAlfr) {
    throw ConfigError("alfr_step on a non-ALFR mechanism");
  }
  const Matrix noise = maybe_noise(state, batch.features.rows(), rng);
  const Matrix* noise_ptr = noise.size() ? &noise : nullptr;
  if (state.phase_u) {
    // Ascent on L over gamma_p: descend along -dL/d gamma_p = lambda_p * dl_p.
    auto grads = compute_gradients(state, batch, settings, noise_ptr, false);
    check_finite(grads.loss, state.steps);
    grads.private_head *= settings.lambda_p;
    nn::adam_step(state.private_head, grads.private_head, state.private_opt);
    finish_step(state);
    return grads.loss;
  }
  auto grads = compute_gradients(state, batch, settings, noise_ptr, true);
  check_finite(grads.loss, state.steps);
  grads.utility_head *= settings.lambda_u;
  nn::adam_step(state.encoder, grads.encoder, state.encoder_opt);
  nn::adam_step(state.decoder, grads.decoder, state.decoder_opt);
  nn::adam_step(state.utility_head, grads.utility_head, state.utility_opt);
  finish_step(state);
  return grads.loss;
}

LossBreakdown pupet_step(MechanismState& state, const Batch& batch,
                         const TrainSettings& settings, Rng& rng) {
  if (state.variant != Variant::kUaePupet) {
    throw ConfigError("pupet_step on a non-UAE-PUPET mechanism");
  }
  const Matrix noise = maybe_noise(state, batch.features.rows(), rng);
  const Matrix* noise_ptr = noise.size() ? &noise : nullptr;
  if (state.phase_u) {
    auto grads = compute_gradients(state, batch, settings, noise_ptr, true);
    check_finite(grads.loss, state.steps);
    nn::adam_step(state.encoder, grads.encoder, state.encoder_opt);
    nn::adam_step(state.decoder, grads.decoder, state.decoder_opt);
    finish_step(state);
    return grads.loss;
  }
  auto grads = compute_gradients(state, batch, settings, noise_ptr, false);
  check_finite(grads.loss, state.steps);
  nn::adam_step(state.private_head, grads.private_head, state.private_opt);
  nn::adam_step(state.utility_head, grads.utility_head, state.utility_opt);
  finish_step(state);
  return grads.loss;
}

LossBreakdown train_step(MechanismState& state, const Batch& batch,
                         const TrainSettings& settings, Rng& rng) {
  return state.variant == Variant::kAlfr ? alfr_step(state, batch, settings, rng)
                                         : pupet_step(state, batch, settings, rng);
}

TrainedMechanism train_mechanism(const Matrix& features,
                                 const LabelColumn& private_labels,
                                 const LabelColumn& utility_labels,
                                 const TrainSettings& settings, Variant variant,
                                 const MechanismState* warm_start) {
  settings.validate();
  if (features.rows() == 0) throw ConfigError("empty training set");
  if (static_cast<std::size_t>(features.rows()) != private_labels.size() ||
      private_labels.size() != utility_labels.size()) {
    throw ConfigError("training features and labels disagree in length");
  }
  const auto input_dim = static_cast<int>(features.cols());
  Rng init_rng(derive_seed(settings.seed, {1}));
  TrainedMechanism result;
  auto& state = result.state;
  if (warm_start != nullptr) {
    warm_start->validate();
    if (warm_start->input_dim() != input_dim || warm_start->variant != variant) {
      throw ConfigError("warm-start mechanism does not match the training data");
    }
    state = *warm_start;
    state.noise_sd = settings.noise_sd;
    state.phase_u = true;
    state.steps = 0;
    state.reset_optimizers(settings);
    state.reset_heads(settings, init_rng);
  } else {
    state = MechanismState::initialize(variant, input_dim, settings, init_rng);
  }
  state.standardizer = data::fit_standardizer(features);

  Batch full;
  full.features = data::apply_standardizer(state.standardizer, features);
  full.private_labels = private_labels;
  full.utility_labels = utility_labels;
  Rng eval_rng(derive_seed(settings.seed, {2}));
  result.trace.initial = composite_loss(state, full, settings, eval_rng);

  Rng rng(derive_seed(settings.seed, {3}));
  const auto rows = static_cast<std::size_t>(features.rows());
  const auto batch_size = static_cast<std::size_t>(settings.batch_size);
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  Batch batch;
  for (int epoch = 0; epoch < settings.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    LossBreakdown sum;
    std::size_t count = 0;
    for (std::size_t begin = 0; begin < rows; begin += batch_size) {
      const std::size_t end = std::min(rows, begin + batch_size);
      const auto b = static_cast<Eigen::Index>(end - begin);
      batch.features.resize(b, full.features.cols());
      batch.private_labels.resize(end - begin);
      batch.utility_labels.resize(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        const auto src = order[i];
        const auto dst = static_cast<Eigen::Index>(i - begin);
        batch.features.row(dst) = full.features.row(static_cast<Eigen::Index>(src));
        batch.private_labels[i - begin] = full.private_labels[src];
        batch.utility_labels[i - begin] = full.utility_labels[src];
      }
      const auto loss = train_step(state, batch, settings, rng);
      sum.reconstruction += loss.reconstruction;
      sum.private_loss += loss.private_loss;
      sum.utility_loss += loss.utility_loss;
      ++count;
    }
    const double n = static_cast<double>(count);
    result.trace.epochs.push_back(LossBreakdown::compose(
        sum.reconstruction / n, sum.private_loss / n, sum.utility_loss / n, settings));
  }
  return result;
}

Matrix sanitize(const MechanismState& state, const Matrix& features,
                std::uint64_t seed) {
  state.validate();
  if (state.standardizer.dim() != features.cols() ||
      state.input_dim() != features.cols()) {
    throw ConfigError("sanitizer expects " + std::to_string(state.input_dim()) +
                      " feature columns, got " + std::to_string(features.cols()));
  }
  Rng rng(seed);
  const Matrix standardized = data::apply_standardizer(state.standardizer, features);
  const Matrix x_hat = generator_apply(state, standardized, Mode::kSanitize, rng);
  return data::invert_standardizer(state.standardizer, x_hat);
}

}  // namespace harmonize::mechanism
