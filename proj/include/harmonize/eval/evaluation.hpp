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

#ifndef HARMONIZE_EVAL_EVALUATION_HPP_
#define HARMONIZE_EVAL_EVALUATION_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "harmonize/data/table.hpp"
#include "harmonize/eval/report.hpp"

namespace harmonize::eval {

// Trains every spec on the published `attribute` column of `train` and
// scores it against that attribute in `test` (typically hidden ground truth).
BenchmarkResult benchmark_accuracy(const std::vector<ClassifierSpec>& specs,
                                   const data::GroupView& train,
                                   const data::GroupView& test,
                                   data::Attribute attribute);
BenchmarkResult benchmark_accuracy(const std::vector<ClassifierSpec>& specs,
                                   const Matrix& train_features,
                                   const LabelColumn& train_labels,
                                   const Matrix& test_features,
                                   const LabelColumn& test_labels);

struct MiOptions {
  // Rows beyond this are subsampled (seeded) before estimation.
  std::size_t max_rows = 4000;
  int neighbors = 3;
  std::uint64_t seed = 0;
};

double subsampled_mi(const Matrix& features, const LabelColumn& labels,
                     const MiOptions& options);

// The group whose hidden labels an attribute annotates (p1, u1 -> G1).
data::GroupId target_group(data::Attribute attribute);

// Cross-group protocol on raw views: p1/u1 classifiers train on G2 and test
// on G1, p2/u2 the reverse. `g1` and `g2` need their hidden labels.
// Digest of the raw views, specs and MI options; cached baselines are reused
// only when their key matches.
std::string baseline_key(const data::GroupView& g1, const data::GroupView& g2,
                         const std::vector<ClassifierSpec>& specs,
                         const MiOptions& mi);
Baselines compute_baselines(const data::GroupView& g1, const data::GroupView& g2,
                            const std::vector<ClassifierSpec>& specs,
                            const MiOptions& mi);

// Same protocol on the released views, joined with the baselines. The
// training side only ever reads published labels.
TradeoffReport evaluate_release(const data::GroupView& g1_release,
                                const data::GroupView& g2_release,
                                const Baselines& baselines,
                                const std::vector<ClassifierSpec>& specs,
                                const MiOptions& mi,
                                double delta = kTradeoffDelta);

enum class AuxStrategy { kAuxOnly, kAuxPlusSanitized };

std::string_view aux_strategy_name(AuxStrategy strategy);  // "aux_only" / ...
AuxStrategy parse_aux_strategy(std::string_view name);

struct AuxAttributeResult {
  data::Attribute attribute = data::Attribute::kP1;
  BenchmarkResult benchmark;
};

struct AuxReport {
  AuxStrategy strategy = AuxStrategy::kAuxOnly;
  std::vector<AuxAttributeResult> results;  // p1, u1, p2, u2

  const BenchmarkResult& at(data::Attribute a) const;
};

// An adversary holding the fully labelled AUX rows. aux_only trains on AUX
// alone; aux_plus_sanitized appends the partner group's public release.
// Either way the test set is the target group's released features against
// its hidden labels.
AuxReport aux_adversary_eval(const data::GroupView& aux,
                             const data::GroupView& g1_release,
                             const data::GroupView& g2_release,
                             const std::vector<ClassifierSpec>& specs,
                             AuxStrategy strategy);

nlohmann::json to_json(const AuxReport& report);

}  // namespace harmonize::eval

#endif  // HARMONIZE_EVAL_EVALUATION_HPP_
