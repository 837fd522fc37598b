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

#include "harmonize/data/sources.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <string>
#include <unordered_map>

#include "harmonize/error.hpp"
#include "harmonize/text.hpp"

namespace harmonize::data {

namespace {

Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = normal(rng);
  }
  return m;
}

double median_of(Vector values) {
  auto* begin = values.data();
  auto* end = begin + values.size();
  auto* mid = begin + values.size() / 2;
  std::nth_element(begin, mid, end);
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(begin, mid);
  return 0.5 * (lower + upper);
}

}  // namespace

LabeledTable generate_synthetic(const SyntheticOptions& options) {
  const auto k = options.rows;
  const int n = options.features;
  if (k < 100) throw ConfigError("synthetic data needs at least 100 rows");
  if (n < 4) throw ConfigError("synthetic data needs at least 4 features");
  if (options.latent_factors < 4) {
    throw ConfigError("synthetic data needs at least 4 latent factors");
  }
  if (!(options.private_loading > 0.0)) {
    throw ConfigError("private factor loading scale must be positive");
  }
  if (options.feature_noise <= 0.0 || options.label_noise < 0.0) {
    throw ConfigError("feature noise must be positive and label noise non-negative");
  }
  const int r = std::min(options.latent_factors, n);
  Rng rng(options.seed);

  // Factors 0..3 drive p1, u1, p2, u2; the private ones load more weakly.
  Matrix loadings = standard_normal(n, r, rng);
  loadings.col(0) *= options.private_loading;
  loadings.col(2) *= options.private_loading;
  const double noise_var = options.feature_noise * options.feature_noise;
  const Matrix covariance = loadings * loadings.transpose() +
                            noise_var * Matrix::Identity(n, n);

  const Matrix factor_dirs = Matrix::Identity(r, 4);

  // Regression of each factor score on x, then Gram-Schmidt in the
  // covariance inner product.
  const Eigen::LLT<Matrix> cov_llt(covariance);
  Matrix weights = cov_llt.solve(loadings * factor_dirs);  // n x 4
  for (int l = 0; l < 4; ++l) {
    for (int prev = 0; prev < l; ++prev) {
      const double proj =
          weights.col(prev).dot(covariance * weights.col(l));
      weights.col(l) -= proj * weights.col(prev);
    }
    const double norm = std::sqrt(weights.col(l).dot(covariance * weights.col(l)));
    weights.col(l) /= norm;
  }

  LabeledTable table;
  const auto rows = static_cast<Eigen::Index>(k);
  const Matrix factors = standard_normal(rows, r, rng);
  const Matrix noise = standard_normal(rows, n, rng);
  table.features = factors * loadings.transpose() + options.feature_noise * noise;
  const Matrix label_noise = standard_normal(rows, 4, rng);
  const Matrix scores =
      table.features * weights + options.label_noise * label_noise;

  table.ids.resize(k);
  std::iota(table.ids.begin(), table.ids.end(), 0);
  for (int l = 0; l < 4; ++l) {
    const double threshold = median_of(scores.col(l));
    auto& column = table.labels[static_cast<std::size_t>(l)];
    column.resize(k);
    for (Eigen::Index i = 0; i < rows; ++i) {
      column[static_cast<std::size_t>(i)] = scores(i, l) > threshold ? 1 : 0;
    }
  }
  table.validate();
  table.validate_balance();
  return table;
}

LabeledTable generate_synthetic(std::size_t rows, int features,
                                std::uint64_t seed) {
  SyntheticOptions options;
  options.rows = rows;
  options.features = features;
  options.seed = seed;
  return generate_synthetic(options);
}

std::array<LabelColumn, 4> discretize_labels(const Matrix& raw,
                                             const Thresholds& thresholds) {
  if (raw.cols() != 4) {
    throw ConfigError("discretize_labels expects 4 raw columns");
  }
  const std::array<double, 4> cut = {thresholds.income, thresholds.employed,
                                     thresholds.white, thresholds.women};
  std::array<LabelColumn, 4> labels;
  for (int c = 0; c < 4; ++c) {
    auto& column = labels[static_cast<std::size_t>(c)];
    column.resize(static_cast<std::size_t>(raw.rows()));
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      column[static_cast<std::size_t>(i)] = raw(i, c) > cut[c] ? 1 : 0;
    }
  }
  return labels;
}

LabeledTable ingest_census(std::istream& csv, const CensusOptions& options) {
  std::string line;
  if (!std::getline(csv, line)) throw DataError("census CSV is empty");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB &&
      static_cast<unsigned char>(line[2]) == 0xBF) {
    line.erase(0, 3);
  }
  const auto header = split_csv_line(line);
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) position[header[i]] = i;

  const auto& plan = options.plan;
  if (plan.inputs.empty()) throw ConfigError("column plan has no input columns");
  std::vector<std::string> wanted = plan.inputs;
  wanted.insert(wanted.end(), {plan.income, plan.employed, plan.white, plan.women});
  std::vector<std::string> absent;
  std::vector<std::size_t> columns;
  for (const auto& name : wanted) {
    auto it = position.find(name);
    if (it == position.end()) {
      absent.push_back(name);
    } else {
      columns.push_back(it->second);
    }
  }
  if (!absent.empty()) {
    throw ConfigError("census CSV is missing column(s): " + join(absent, ", "));
  }

  const std::size_t n_inputs = plan.inputs.size();
  std::vector<std::vector<double>> kept;
  std::vector<std::int64_t> kept_ids;
  std::int64_t data_row = -1;
  while (std::getline(csv, line)) {
    if (line.empty() || line == "\r") continue;
    ++data_row;
    const auto fields = split_csv_line(line);
    std::vector<double> values;
    values.reserve(columns.size());
    bool complete = true;
    for (auto col : columns) {
      if (col >= fields.size()) {
        complete = false;
        break;
      }
      const auto v = parse_double(fields[col]);
      if (!v) {
        complete = false;
        break;
      }
      values.push_back(*v);
    }
    if (!complete) continue;
    kept.push_back(std::move(values));
    kept_ids.push_back(data_row);
  }

  if (kept.size() < options.target_rows) {
    throw DataError("census CSV has only " + std::to_string(kept.size()) +
                    " complete rows; " + std::to_string(options.target_rows) +
                    " required");
  }

  std::vector<std::size_t> chosen(kept.size());
  std::iota(chosen.begin(), chosen.end(), 0);
  if (kept.size() > options.target_rows) {
    Rng rng(options.seed);
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.resize(options.target_rows);
    std::sort(chosen.begin(), chosen.end());
  }

  const auto k = static_cast<Eigen::Index>(chosen.size());
  LabeledTable table;
  table.features.resize(k, static_cast<Eigen::Index>(n_inputs));
  Matrix raw_labels(k, 4);
  table.ids.reserve(chosen.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& values = kept[chosen[static_cast<std::size_t>(i)]];
    for (std::size_t c = 0; c < n_inputs; ++c) {
      table.features(i, static_cast<Eigen::Index>(c)) = values[c];
    }
    for (int c = 0; c < 4; ++c) raw_labels(i, c) = values[n_inputs + c];
    table.ids.push_back(kept_ids[chosen[static_cast<std::size_t>(i)]]);
  }
  table.labels = discretize_labels(raw_labels, options.thresholds);
  table.validate();
  table.validate_balance(options.balance_low, options.balance_high);
  return table;
}

LabeledTable ingest_census(const std::filesystem::path& path,
                           const CensusOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open census CSV " + path.string());
  return ingest_census(in, options);
}

}  // namespace harmonize::data
