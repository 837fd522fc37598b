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

#ifndef HARMONIZE_MECHANISM_PERSIST_HPP_
#define HARMONIZE_MECHANISM_PERSIST_HPP_

#include <filesystem>
#include <string>

#include "harmonize/mechanism/mechanism.hpp"

namespace harmonize::mechanism {

// A mechanism directory holds generator.hznn (encoder layers followed by the
// decoder layers), private_head.hznn, utility_head.hznn and manifest.txt.
// The manifest is `key=value` per line:
//
//   variant               alfr | uae-pupet
//   iteration             harmonization round m (0 outside a run)
//   training_data_sha256  digest of the public CSV bytes the mechanism saw
//   encoder_layers        number of leading generator layers that encode
//   noise_sd, alpha, lambda_p, lambda_u, epochs, batch_size, learning_rate,
//   seed, encoder_hidden, bottleneck, decoder_hidden, head_hidden
//   standardizer_mean, standardizer_sd   comma-separated doubles
//
// Optimizer moments are not stored; a loaded state has fresh optimizers.
struct MechanismRecord {
  MechanismState state;
  TrainSettings settings;
  std::string training_data_sha256;
  int iteration = 0;
};

std::string encode_manifest(const MechanismRecord& record);
void save_mechanism(const std::filesystem::path& dir, const MechanismRecord& record);
// Throws DataError on missing files or a malformed manifest.
MechanismRecord load_mechanism(const std::filesystem::path& dir);

}  // namespace harmonize::mechanism

#endif  // HARMONIZE_MECHANISM_PERSIST_HPP_
