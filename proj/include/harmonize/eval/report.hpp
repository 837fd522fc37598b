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

#ifndef HARMONIZE_EVAL_REPORT_HPP_
#define HARMONIZE_EVAL_REPORT_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "harmonize/data/table.hpp"
#include "harmonize/eval/classifier.hpp"
#include "harmonize/eval/metrics.hpp"

namespace harmonize::eval {

struct ModelScore {
  ClassifierKind kind = ClassifierKind::kLogistic;
  double accuracy = 0.0;
  double auroc = 0.0;
};

// Highest test accuracy over a set of classifier specs.
struct BenchmarkResult {
  double accuracy = 0.0;
  double auroc = 0.0;  // of the best model
  ClassifierKind best = ClassifierKind::kLogistic;
  std::vector<ModelScore> per_model;  // in spec order
};

// No-privacy reference for one attribute: same protocol on raw features.
struct AttributeBaseline {
  data::Attribute attribute = data::Attribute::kP1;
  BenchmarkResult benchmark;
  double mi_raw = 0.0;
};

struct Baselines {
  std::array<AttributeBaseline, 4> attributes;  // indexed by Attribute
  std::string key;  // identifies the raw data and specs the values came from

  const AttributeBaseline& at(data::Attribute a) const {
    return attributes[static_cast<std::size_t>(a)];
  }
};

struct AttributeReport {
  data::Attribute attribute = data::Attribute::kP1;
  double c_n = 0.0;
  double c_a = 0.0;
  double c_r = kChanceAccuracy;
  double auroc_n = 0.0;
  double auroc_a = 0.0;
  double mi_raw = 0.0;
  double mi_sanitized = 0.0;
  double M = 0.0;  // M_p for the private attribute, M_u for the utility one
  ClassifierKind best_model = ClassifierKind::kLogistic;
  std::vector<ModelScore> per_model_raw;
  std::vector<ModelScore> per_model_sanitized;
};

struct GroupReport {
  data::GroupId group = data::GroupId::kG1;
  AttributeReport private_attr;
  AttributeReport utility_attr;
  double T = 0.0;
};

struct TradeoffReport {
  GroupReport g1;
  GroupReport g2;
  double delta = kTradeoffDelta;
  std::uint64_t seed = 0;

  double mean_T() const { return 0.5 * (g1.T + g2.T); }
  const GroupReport& group(data::GroupId id) const {
    return id == data::GroupId::kG2 ? g2 : g1;
  }
};

// {"G1": {"p1": {...}, "u1": {...}}, "G2": {...}, "T_g1", "T_g2", "delta", "seed"}
nlohmann::json to_json(const TradeoffReport& report);
TradeoffReport report_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const BenchmarkResult& result);
nlohmann::json to_json(const Baselines& baselines);
Baselines baselines_from_json(const nlohmann::json& doc);

}  // namespace harmonize::eval

#endif  // HARMONIZE_EVAL_REPORT_HPP_
