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

#ifndef HARMONIZE_PIPELINE_EXPERIMENT_HPP_
#define HARMONIZE_PIPELINE_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "harmonize/data/partition.hpp"
#include "harmonize/data/sources.hpp"
#include "harmonize/eval/evaluation.hpp"
#include "harmonize/pipeline/harmonizer.hpp"

namespace harmonize::pipeline {

struct ExperimentConfig {
  std::string dataset = "synthetic";  // used in plot-data file names
  data::SyntheticOptions synthetic;   // seed is replaced per repetition
  // When set, every repetition re-partitions this table instead of
  // generating synthetic data.
  std::optional<data::LabeledTable> table;
  data::PartitionSizes sizes;
  HarmonizeOptions harmonize;      // seed is replaced per repetition
  SelectionCriterion selection;
  std::vector<eval::ClassifierSpec> specs;  // empty = defaults
  eval::MiOptions mi;
  int repetitions = 25;
  std::uint64_t seed0 = 0;
  bool aux = true;
  // lambda_p values for the MI sweep, run at seed0 only.
  std::vector<double> lambda_sweep = {0.1, 0.2, 0.5, 1.0};
  int jobs = 1;
};

// One full pipeline: data, partition, harmonization, selection, release,
// evaluation and (optionally) both auxiliary adversaries.
struct RepetitionResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  int selected = 0;
  eval::TradeoffReport report;
  std::optional<eval::AuxReport> aux_only;
  std::optional<eval::AuxReport> aux_plus_sanitized;
  // Control: aux_only adversary against the raw (unsanitized) targets.
  std::optional<eval::AuxReport> aux_raw_control;
};

struct Stat {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 when R = 1
  std::size_t count = 0;
};

struct SweepPoint {
  std::optional<double> lambda_p;  // nullopt = raw data, no mechanism
  std::map<std::string, double> mi;  // keyed by attribute name
};

struct ExperimentSummary {
  int repetitions = 0;
  int completed = 0;
  bool incomplete = false;
  std::map<std::string, Stat> stats;  // flattened scalar name -> summary
  std::vector<RepetitionResult> runs;
  std::vector<SweepPoint> sweep;
};

using ProgressCallback = std::function<void(const std::string&)>;

RepetitionResult run_repetition(const ExperimentConfig& config, std::uint64_t seed,
                                const ProgressCallback& progress = {});

ExperimentSummary run_experiment_suite(const ExperimentConfig& config,
                                       const ProgressCallback& progress = {});

// Mean and sample sd of each value.
Stat summarize(const std::vector<double>& values);

// Scalar metrics of one repetition, e.g. "G1.p1.c_a", "T_g1", "aux_only.p1".
std::map<std::string, double> flatten(const RepetitionResult& result);

nlohmann::json to_json(const ExperimentSummary& summary);

// summary.json, fig4_<dataset>_<group>.csv (model,target,stage,accuracy,
// averaged over completed repetitions) and fig5_<dataset>.csv
// (lambda_p,target,mi).
void write_summary(const std::filesystem::path& dir, const std::string& dataset,
                   const ExperimentSummary& summary);
std::string fig4_csv(const ExperimentSummary& summary, data::GroupId group);
std::string fig5_csv(const ExperimentSummary& summary);

}  // namespace harmonize::pipeline

#endif  // HARMONIZE_PIPELINE_EXPERIMENT_HPP_
