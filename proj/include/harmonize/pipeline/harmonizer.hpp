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

#ifndef HARMONIZE_PIPELINE_HARMONIZER_HPP_
#define HARMONIZE_PIPELINE_HARMONIZER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "harmonize/data/partition.hpp"
#include "harmonize/data/table.hpp"
#include "harmonize/eval/evaluation.hpp"
#include "harmonize/mechanism/mechanism.hpp"
#include "harmonize/mechanism/persist.hpp"

namespace harmonize::pipeline {

struct HarmonizeOptions {
  mechanism::Variant variant = mechanism::Variant::kUaePupet;
  mechanism::TrainSettings settings;
  int rounds = 3;
  // Rows of each group held out of mechanism training for the per-iteration
  // validation reports.
  double validation_fraction = 0.2;
  // Later rounds start from the previous round's generator (heads are always
  // fresh); false re-initializes every mechanism.
  bool warm_start = true;
  std::uint64_t seed = 0;
  std::vector<eval::ClassifierSpec> validation_specs;  // empty = defaults
  eval::MiOptions validation_mi{.max_rows = 2000};

  void validate() const;
};

struct IterationRecord {
  int m = 0;
  mechanism::MechanismRecord pm1;  // protects G1, trained on G2-side data
  mechanism::MechanismRecord pm2;  // protects G2, trained on sanitized G1
  Matrix g1_sanitized;             // all G1 rows
  Matrix g2_sanitized;             // all G2 rows
  // SHA-256 of the public CSV bytes of each snapshot.
  std::string g1_snapshot_sha256;
  std::string g2_snapshot_sha256;
  mechanism::TrainingTrace pm1_trace;
  mechanism::TrainingTrace pm2_trace;
  eval::TradeoffReport validation;
};

struct HarmonizationRun {
  HarmonizeOptions options;
  data::RowSplit g1_split;
  data::RowSplit g2_split;
  std::string raw_g1_sha256;
  std::string raw_g2_sha256;
  std::vector<IterationRecord> records;
  int selected = 0;  // m*, 1-based; 0 until select_iteration runs

  const IterationRecord& record(int m) const;
};

// Called after each completed round, e.g. for progress logging.
using RoundCallback = std::function<void(const IterationRecord&)>;

// Round m: PM1 trains on the training rows of G2 (raw at m = 1, the previous
// round's sanitized G2 after that) with labels p1/u1, sanitizes all of G1;
// PM2 trains on the training rows of that snapshot with labels p2/u2 and
// sanitizes all of G2. Training failures carry the round index.
HarmonizationRun run_harmonization(const data::GroupView& g1, const data::GroupView& g2,
                                   const HarmonizeOptions& options,
                                   const RoundCallback& on_round = {});

// Checks the recorded digests against the schedule: round m's PM2 saw round
// m's G1 snapshot, round m+1's PM1 saw round m's G2 snapshot, raw G1 never
// reached PM2 and raw G2 reached PM1 only at m = 1. Throws InternalError.
void verify_chain(const HarmonizationRun& run);

// Optional bounds on the validation accuracies of both groups.
struct SelectionCriterion {
  std::optional<double> max_private_accuracy;
  std::optional<double> min_utility_accuracy;

  bool constrained() const {
    return max_private_accuracy.has_value() || min_utility_accuracy.has_value();
  }
};

// Smallest mean T over both groups (ties to the earlier round) among the
// rounds meeting the criterion. No feasible round raises SelectionError.
int select_iteration(const HarmonizationRun& run, const SelectionCriterion& criterion = {});

struct OpenAccessRelease {
  data::GroupView g1;  // sanitized features + p2, u2
  data::GroupView g2;  // sanitized features + p1, u1
  nlohmann::json manifest;
};

// Joins round m*'s snapshots with each group's published labels.
OpenAccessRelease publish(const HarmonizationRun& run, const data::GroupView& g1,
                          const data::GroupView& g2);

// Sanitized view of a group with the given snapshot; hidden labels kept
// in memory for evaluation, never written with the public file.
data::GroupView snapshot_view(const data::GroupView& group, const Matrix& snapshot);

// run/<id>/iter_<m>/{pm1/, pm2/, g1_sanitized.csv, g2_sanitized.csv, report.json}
void write_run(const std::filesystem::path& run_dir, const HarmonizationRun& run,
               const data::GroupView& g1, const data::GroupView& g2);
// release/{g1_public.csv, g2_public.csv, manifest.json}
void write_release(const std::filesystem::path& release_dir,
                   const OpenAccessRelease& release);

nlohmann::json settings_json(const mechanism::TrainSettings& settings);

}  // namespace harmonize::pipeline

#endif  // HARMONIZE_PIPELINE_HARMONIZER_HPP_
