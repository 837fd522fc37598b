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

#ifndef HARMONIZE_MECHANISM_MECHANISM_HPP_
#define HARMONIZE_MECHANISM_MECHANISM_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "harmonize/data/standardize.hpp"
#include "harmonize/nn/adam.hpp"
#include "harmonize/nn/dense_net.hpp"
#include "harmonize/types.hpp"

namespace harmonize::mechanism {

// ALFR: plain autoencoder generator; the adversary head ascends the composite
// loss while generator and utility head descend it.
// UAE-PUPET: autoencoder with Gaussian noise on the bottleneck; the generator
// descends the composite loss and each head descends its own cross-entropy.
enum class Variant { kAlfr, kUaePupet };

std::string_view variant_name(Variant variant);  // "alfr" / "uae-pupet"
Variant parse_variant(std::string_view name);

struct Architecture {
  std::vector<int> encoder_hidden = {64, 32};
  int bottleneck = 8;
  std::vector<int> decoder_hidden = {32, 64};
  std::vector<int> head_hidden = {32, 16};
};

struct TrainSettings {
  double alpha = 1.0;
  double lambda_p = 0.2;
  double lambda_u = 1.0;
  double noise_sd = 0.1;  // UAE bottleneck noise; ignored by ALFR
  int epochs = 50;
  int batch_size = 256;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  Architecture architecture;

  // Throws ConfigError on negative weights, alpha = lambda_u = 0, or
  // non-positive batch size / learning rate.
  void validate() const;
};

// L = alpha * C - lambda_p * l_p + lambda_u * l_u.
struct LossBreakdown {
  double reconstruction = 0.0;  // C
  double private_loss = 0.0;    // l_p
  double utility_loss = 0.0;    // l_u
  double total = 0.0;           // L

  static LossBreakdown compose(double reconstruction, double private_loss,
                               double utility_loss, const TrainSettings& settings);
};

// Standardized features with one private and one utility label per row.
struct Batch {
  Matrix features;
  LabelColumn private_labels;
  LabelColumn utility_labels;

  std::size_t rows() const { return private_labels.size(); }
  void validate() const;
};

struct MechanismState {
  Variant variant = Variant::kUaePupet;
  nn::DenseNet encoder;       // n -> bottleneck
  nn::DenseNet decoder;       // bottleneck -> n
  nn::DenseNet private_head;  // n -> 1, simulated adversary s_p
  nn::DenseNet utility_head;  // n -> 1, simulated utility provider s_u
  nn::AdamState encoder_opt;
  nn::AdamState decoder_opt;
  nn::AdamState private_opt;
  nn::AdamState utility_opt;
  // U in the alternating schedule; toggled after every minibatch step.
  bool phase_u = true;
  double noise_sd = 0.0;
  std::uint64_t steps = 0;
  data::StandardizeStats standardizer;  // fitted on the training rows

  static MechanismState initialize(Variant variant, int input_dim,
                                   const TrainSettings& settings, Rng& rng);
  // Fresh heads and head optimizers; the generator is kept.
  void reset_heads(const TrainSettings& settings, Rng& rng);
  // Fresh optimizer state for every block at the settings' learning rate.
  void reset_optimizers(const TrainSettings& settings);

  int input_dim() const { return encoder.input_dim(); }
  int bottleneck_dim() const { return encoder.output_dim(); }
  // Throws ConfigError when the four networks do not fit together.
  void validate() const;
};

enum class Mode { kTrain, kSanitize };

// x_hat = decoder(encoder(x) + eta * z) with eta = noise_sd for UAE-PUPET and
// 0 for ALFR, z standard normal drawn from `rng`. Noise is applied in both
// modes. `x` must already be standardized.
Matrix generator_apply(const MechanismState& state, const Matrix& x, Mode mode,
                       Rng& rng);

// Gradients of one minibatch. Generator gradients are of L; head gradients
// are of the head's own cross-entropy (dL/d gamma_p = -lambda_p * private_head
// and dL/d gamma_u = lambda_u * utility_head).
struct MechanismGradients {
  LossBreakdown loss;
  nn::Gradients encoder;
  nn::Gradients decoder;
  nn::Gradients private_head;
  nn::Gradients utility_head;
};

// `bottleneck_noise` is the b x bottleneck draw z (already unscaled); pass
// nullptr for a noiseless pass. Generator gradients are skipped when
// `with_generator` is false.
MechanismGradients compute_gradients(const MechanismState& state,
                                     const Batch& batch,
                                     const TrainSettings& settings,
                                     const Matrix* bottleneck_noise,
                                     bool with_generator = true);

LossBreakdown composite_loss(const MechanismState& state, const Batch& batch,
                             const TrainSettings& settings, Rng& rng);

// One alternating step. Returns the loss measured before the update and
// toggles phase_u. A non-finite loss raises TrainingError.
LossBreakdown alfr_step(MechanismState& state, const Batch& batch,
                        const TrainSettings& settings, Rng& rng);
LossBreakdown pupet_step(MechanismState& state, const Batch& batch,
                         const TrainSettings& settings, Rng& rng);
LossBreakdown train_step(MechanismState& state, const Batch& batch,
                         const TrainSettings& settings, Rng& rng);

struct TrainingTrace {
  LossBreakdown initial;              // full training set, before any step
  std::vector<LossBreakdown> epochs;  // mean over each epoch's minibatches
};

struct TrainedMechanism {
  MechanismState state;
  TrainingTrace trace;
};

// Fits the standardizer on `features` (raw scale), then runs `epochs` passes
// of shuffled minibatches. With `warm_start`, the generator weights are
// copied from it and the heads re-initialized.
TrainedMechanism train_mechanism(const Matrix& features,
                                 const LabelColumn& private_labels,
                                 const LabelColumn& utility_labels,
                                 const TrainSettings& settings, Variant variant,
                                 const MechanismState* warm_start = nullptr);

// Standardizes raw `features` with the training stats, applies the generator
// in sanitize mode with noise seeded by `seed`, and maps back to raw scale.
Matrix sanitize(const MechanismState& state, const Matrix& features,
                std::uint64_t seed);

}  // namespace harmonize::mechanism

#endif  // HARMONIZE_MECHANISM_MECHANISM_HPP_
