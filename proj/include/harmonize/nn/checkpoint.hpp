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

#ifndef HARMONIZE_NN_CHECKPOINT_HPP_
#define HARMONIZE_NN_CHECKPOINT_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "harmonize/nn/dense_net.hpp"

namespace harmonize::nn {

// Binary network checkpoint, all integers and floats little-endian:
//
//   offset  size  field
//   0       4     magic "HZNN"
//   4       4     format version (u32, currently 1)
//   8       4     layer count L (u32)
//   then for each of the L layers:
//           4     input dim  (u32)
//           4     output dim (u32)
//           1     activation tag (u8: 0 identity, 1 relu, 2 sigmoid)
//           8*out*in  weights, row-major f64 (row = output unit)
//           8*out     biases, f64
//
// Decoding validates magic, version, tags, dimension chaining and length.
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string encode_checkpoint(const DenseNet& net);
DenseNet decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const DenseNet& net);
DenseNet load_checkpoint(const std::filesystem::path& path);

}  // namespace harmonize::nn

#endif  // HARMONIZE_NN_CHECKPOINT_HPP_
