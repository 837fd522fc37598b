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

#ifndef HARMONIZE_DATA_SOURCES_HPP_
#define HARMONIZE_DATA_SOURCES_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "harmonize/data/table.hpp"

namespace harmonize::data {

struct SyntheticOptions {
  std::size_t rows = 72000;
  int features = 16;
  // Dimension of the latent factor block driving the features.
  int latent_factors = 8;
  // Per-feature isotropic noise on top of the factor loadings; keeps the
  // feature covariance full rank.
  double feature_noise = 0.3;
  // Loading scale of the two factors behind the private labels.
  double private_loading = 0.7;
  // Standard deviation of the noise added to each unit-variance latent label
  // score; 0.16 puts the Bayes accuracy near 0.95.
  double label_noise = 0.16;
  std::uint64_t seed = 0;
};

// Features x = B f + feature_noise * e with f ~ N(0, I_r), which makes
// x ~ N(0, S) with full-rank S = B B^T + feature_noise^2 I. Label l is 1 iff
// w_l . x + noise exceeds its median, where w_l = S^-1 B e_l regresses factor
// l on x (factors 0..3 for p1, u1, p2, u2), re-orthonormalized in the S inner
// product so the four scores w_l . x are independent standard normals.
LabeledTable generate_synthetic(const SyntheticOptions& options);
LabeledTable generate_synthetic(std::size_t rows, int features,
                                std::uint64_t seed);

// A label is 1 when the raw value is strictly greater than its threshold.
struct Thresholds {
  double income = 55000.0;
  double employed = 2000.0;
  double white = 70.0;
  double women = 2000.0;
};

// raw columns: (Income, Employed, White%, Women) -> (p1, u1, p2, u2).
std::array<LabelColumn, 4> discretize_labels(const Matrix& raw,
                                             const Thresholds& thresholds = {});

struct ColumnPlan {
  std::vector<std::string> inputs = {
      "TotalPop",     "Men",          "Hispanic", "Black",
      "Native",       "Asian",        "Pacific",  "Poverty",
      "Professional", "Service",      "Office",   "Construction",
      "Production",   "Drive",        "Carpool",  "Transit"};
  std::string income = "Income";
  std::string employed = "Employed";
  std::string white = "White";
  std::string women = "Women";
};

struct CensusOptions {
  ColumnPlan plan;
  Thresholds thresholds;
  std::size_t target_rows = 72000;
  std::uint64_t seed = 0;
  // Class-1 fraction bounds checked on the discretized labels.
  double balance_low = 0.4;
  double balance_high = 0.6;
};

// Reads a header-first CSV, drops rows with a missing or non-numeric value in
// any selected column, and keeps a seeded random subset of `target_rows` rows
// in file order. Row ids are 0-based data-row indices in the file.
LabeledTable ingest_census(std::istream& csv, const CensusOptions& options);
LabeledTable ingest_census(const std::filesystem::path& path,
                           const CensusOptions& options);

}  // namespace harmonize::data

#endif  // HARMONIZE_DATA_SOURCES_HPP_
