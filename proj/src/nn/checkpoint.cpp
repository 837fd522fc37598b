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

#include "harmonize/nn/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "harmonize/error.hpp"

namespace harmonize::nn {

namespace {

constexpr char kMagic[4] = {'H', 'Z', 'N', 'N'};
constexpr std::uint32_t kMaxDim = 1u << 20;

template <typename T>
void put(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  out.append(bytes, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (bytes_.size() - offset_ < sizeof(T)) {
      throw DataError("checkpoint truncated at byte " + std::to_string(offset_));
    }
    char raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + offset_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(std::begin(raw), std::end(raw));
    }
    offset_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }

  std::string_view take(std::size_t count) {
    if (bytes_.size() - offset_ < count) {
      throw DataError("checkpoint truncated at byte " + std::to_string(offset_));
    }
    auto view = bytes_.substr(offset_, count);
    offset_ += count;
    return view;
  }

  bool done() const { return offset_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t offset_ = 0;
};

}  // namespace

std::string encode_checkpoint(const DenseNet& net) {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(net.layers().size()));
  for (const auto& layer : net.layers()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(layer.input_dim()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(layer.output_dim()));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(layer.activation));
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        put<double>(out, layer.weight(r, c));
      }
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
      put<double>(out, layer.bias(r));
    }
  }
  return out;
}

DenseNet decode_checkpoint(std::string_view bytes) {
  Reader reader(bytes);
  if (reader.take(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    throw DataError("not a network checkpoint (bad magic)");
  }
  const auto version = reader.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = reader.get<std::uint32_t>();
  std::vector<DenseLayer> layers;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto in = reader.get<std::uint32_t>();
    const auto out = reader.get<std::uint32_t>();
    const auto tag = reader.get<std::uint8_t>();
    if (in == 0 || out == 0 || in > kMaxDim || out > kMaxDim) {
      throw DataError("checkpoint layer " + std::to_string(i) +
                      " has invalid dimensions");
    }
    if (tag > static_cast<std::uint8_t>(Activation::kSigmoid)) {
      throw DataError("checkpoint layer " + std::to_string(i) +
                      " has unknown activation tag " + std::to_string(tag));
    }
    DenseLayer layer;
    layer.activation = static_cast<Activation>(tag);
    layer.weight.resize(out, in);
    for (std::uint32_t r = 0; r < out; ++r) {
      for (std::uint32_t c = 0; c < in; ++c) layer.weight(r, c) = reader.get<double>();
    }
    layer.bias.resize(out);
    for (std::uint32_t r = 0; r < out; ++r) layer.bias(r) = reader.get<double>();
    layers.push_back(std::move(layer));
  }
  if (!reader.done()) throw DataError("trailing bytes after checkpoint");
  try {
    return DenseNet(std::move(layers));
  } catch (const ConfigError& e) {
    throw DataError(std::string("inconsistent checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const DenseNet& net) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  const std::string bytes = encode_checkpoint(net);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

DenseNet load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace harmonize::nn
