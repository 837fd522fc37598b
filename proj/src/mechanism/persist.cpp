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

#include "harmonize/mechanism/persist.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "harmonize/error.hpp"
#include "harmonize/nn/checkpoint.hpp"
#include "harmonize/text.hpp"

namespace harmonize::mechanism {

namespace {

std::string int_list(const std::vector<int>& values) {
  std::vector<std::string> parts;
  for (int v : values) parts.push_back(std::to_string(v));
  return join(parts, ",");
}

std::string double_list(const Vector& values) {
  std::vector<std::string> parts;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    parts.push_back(format_double(values(i)));
  }
  return join(parts, ",");
}

class ManifestReader {
 public:
  ManifestReader(std::string_view text, std::filesystem::path source)
      : source_(std::move(source)) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail("line without '=': " + line);
      values_[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }

  const std::string& get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) fail("missing key '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) const {
    const auto v = parse_double(get(key));
    if (!v) fail("key '" + key + "' is not a number");
    return *v;
  }

  long long integer(const std::string& key) const {
    const double v = number(key);
    if (v != static_cast<double>(static_cast<long long>(v))) {
      fail("key '" + key + "' is not an integer");
    }
    return static_cast<long long>(v);
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    try {
      std::size_t used = 0;
      const auto& text = get(key);
      const auto v = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::logic_error&) {
      fail("key '" + key + "' is not an unsigned integer");
    }
  }

  std::vector<int> ints(const std::string& key) const {
    std::vector<int> out;
    const auto& text = get(key);
    if (text.empty()) return out;
    for (const auto& part : split_csv_line(text)) {
      const auto v = parse_double(part);
      if (!v || *v < 1) fail("key '" + key + "' holds a bad width");
      out.push_back(static_cast<int>(*v));
    }
    return out;
  }

  Vector doubles(const std::string& key) const {
    const auto parts = split_csv_line(get(key));
    Vector out(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto v = parse_double(parts[i]);
      if (!v) fail("key '" + key + "' holds a non-number");
      out(static_cast<Eigen::Index>(i)) = *v;
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(source_.string() + ": " + what);
  }

 private:
  std::filesystem::path source_;
  std::map<std::string, std::string> values_;
};

}  // namespace

std::string encode_manifest(const MechanismRecord& record) {
  const auto& s = record.settings;
  const auto& st = record.state;
  std::ostringstream out;
  out << "variant=" << variant_name(st.variant) << '\n'
      << "iteration=" << record.iteration << '\n'
      << "training_data_sha256=" << record.training_data_sha256 << '\n'
      << "encoder_layers=" << st.encoder.layers().size() << '\n'
      << "noise_sd=" << format_double(st.noise_sd) << '\n'
      << "alpha=" << format_double(s.alpha) << '\n'
      << "lambda_p=" << format_double(s.lambda_p) << '\n'
      << "lambda_u=" << format_double(s.lambda_u) << '\n'
      << "epochs=" << s.epochs << '\n'
      << "batch_size=" << s.batch_size << '\n'
      << "learning_rate=" << format_double(s.learning_rate) << '\n'
      << "seed=" << s.seed << '\n'
      << "encoder_hidden=" << int_list(s.architecture.encoder_hidden) << '\n'
      << "bottleneck=" << s.architecture.bottleneck << '\n'
      << "decoder_hidden=" << int_list(s.architecture.decoder_hidden) << '\n'
      << "head_hidden=" << int_list(s.architecture.head_hidden) << '\n'
      << "standardizer_mean=" << double_list(st.standardizer.mean) << '\n'
      << "standardizer_sd=" << double_list(st.standardizer.sd) << '\n';
  return out.str();
}

void save_mechanism(const std::filesystem::path& dir, const MechanismRecord& record) {
  record.state.validate();
  std::filesystem::create_directories(dir);
  nn::save_checkpoint(dir / "generator.hznn",
                      nn::concatenate(record.state.encoder, record.state.decoder));
  nn::save_checkpoint(dir / "private_head.hznn", record.state.private_head);
  nn::save_checkpoint(dir / "utility_head.hznn", record.state.utility_head);
  write_file(dir / "manifest.txt", encode_manifest(record));
}

MechanismRecord load_mechanism(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.txt";
  if (!std::filesystem::exists(manifest_path)) {
    throw DataError("mechanism manifest not found: " + manifest_path.string());
  }
  const ManifestReader m(read_file(manifest_path), manifest_path);

  MechanismRecord record;
  auto& s = record.settings;
  s.alpha = m.number("alpha");
  s.lambda_p = m.number("lambda_p");
  s.lambda_u = m.number("lambda_u");
  s.noise_sd = m.number("noise_sd");
  s.epochs = static_cast<int>(m.integer("epochs"));
  s.batch_size = static_cast<int>(m.integer("batch_size"));
  s.learning_rate = m.number("learning_rate");
  s.seed = m.unsigned_integer("seed");
  s.architecture.encoder_hidden = m.ints("encoder_hidden");
  s.architecture.bottleneck = static_cast<int>(m.integer("bottleneck"));
  s.architecture.decoder_hidden = m.ints("decoder_hidden");
  s.architecture.head_hidden = m.ints("head_hidden");
  record.iteration = static_cast<int>(m.integer("iteration"));
  record.training_data_sha256 = m.get("training_data_sha256");

  auto& st = record.state;
  try {
    st.variant = parse_variant(m.get("variant"));
  } catch (const ConfigError& e) {
    m.fail(e.what());
  }
  st.noise_sd = s.noise_sd;
  const auto generator = nn::load_checkpoint(dir / "generator.hznn");
  const auto split = m.integer("encoder_layers");
  const auto& layers = generator.layers();
  if (split < 1 || split >= static_cast<long long>(layers.size())) {
    m.fail("encoder_layers out of range");
  }
  st.encoder = nn::DenseNet(std::vector<nn::DenseLayer>(layers.begin(), layers.begin() + split));
  st.decoder = nn::DenseNet(std::vector<nn::DenseLayer>(layers.begin() + split, layers.end()));
  st.private_head = nn::load_checkpoint(dir / "private_head.hznn");
  st.utility_head = nn::load_checkpoint(dir / "utility_head.hznn");
  st.standardizer.mean = m.doubles("standardizer_mean");
  st.standardizer.sd = m.doubles("standardizer_sd");
  if (st.standardizer.mean.size() != st.input_dim() ||
      st.standardizer.sd.size() != st.input_dim()) {
    m.fail("standardizer length does not match the generator");
  }
  try {
    st.validate();
  } catch (const ConfigError& e) {
    m.fail(e.what());
  }
  st.reset_optimizers(s);
  return record;
}

}  // namespace harmonize::mechanism
