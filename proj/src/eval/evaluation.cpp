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

#include "harmonize/eval/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "harmonize/data/view_io.hpp"
#include "harmonize/error.hpp"
#include "harmonize/eval/mutual_info.hpp"
#include "harmonize/fingerprint.hpp"
#include "harmonize/seeds.hpp"
#include "harmonize/text.hpp"

namespace harmonize::eval {

using data::Attribute;
using data::GroupId;
using data::GroupView;

BenchmarkResult benchmark_accuracy(const std::vector<ClassifierSpec>& specs,
                                   const Matrix& train_features,
                                   const LabelColumn& train_labels,
                                   const Matrix& test_features,
                                   const LabelColumn& test_labels) {
  if (specs.empty()) throw ConfigError("benchmark needs at least one classifier spec");
  if (train_features.cols() != test_features.cols()) {
    throw ConfigError("train and test feature widths differ");
  }
  BenchmarkResult result;
  bool first = true;
  for (const auto& spec : specs) {
    const auto model = train_classifier(spec, train_features, train_labels);
    const Vector p = model.predict_proba(test_features);
    const std::span<const double> probs(p.data(), static_cast<std::size_t>(p.size()));
    const ModelScore score{spec.kind, accuracy(probs, test_labels), auroc(probs, test_labels)};
    result.per_model.push_back(score);
    if (first || score.accuracy > result.accuracy) {
      result.accuracy = score.accuracy;
      result.auroc = score.auroc;
      result.best = score.kind;
      first = false;
    }
  }
  return result;
}

BenchmarkResult benchmark_accuracy(const std::vector<ClassifierSpec>& specs,
                                   const GroupView& train, const GroupView& test,
                                   Attribute attribute) {
  if (!train.published.has(attribute)) {
    throw DataError("training view " + std::string(data::group_name(train.group)) +
                    " does not publish " + std::string(data::attribute_name(attribute)));
  }
  return benchmark_accuracy(specs, train.features, train.published.get(attribute),
                            test.features, test.label(attribute));
}

double subsampled_mi(const Matrix& features, const LabelColumn& labels,
                     const MiOptions& options) {
  const auto rows = labels.size();
  if (rows <= options.max_rows) {
    return estimate_mi(features, labels, options.neighbors);
  }
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(options.seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(options.max_rows);
  std::sort(order.begin(), order.end());
  return estimate_mi(data::take_rows(features, order), data::take(labels, order),
                     options.neighbors);
}

GroupId target_group(Attribute attribute) {
  return attribute == Attribute::kP1 || attribute == Attribute::kU1 ? GroupId::kG1
                                                                    : GroupId::kG2;
}

namespace {

MiOptions mi_for(const MiOptions& base, Attribute a) {
  MiOptions out = base;
  out.seed = derive_seed(base.seed, {static_cast<std::uint64_t>(a)});
  return out;
}

const GroupView& pick(GroupId id, const GroupView& g1, const GroupView& g2) {
  return id == GroupId::kG1 ? g1 : g2;
}

void check_pair(const GroupView& g1, const GroupView& g2) {
  if (g1.group != GroupId::kG1 || g2.group != GroupId::kG2) {
    throw ConfigError("expected a G1 view and a G2 view");
  }
}

std::string spec_text(const std::vector<ClassifierSpec>& specs, const MiOptions& mi) {
  std::string out;
  for (const auto& s : specs) {
    out += std::string(classifier_name(s.kind)) + ":" + std::to_string(s.epochs) + ":" +
           format_double(s.learning_rate) + ":" + std::to_string(s.batch_size) + ":" +
           std::to_string(s.seed) + ":";
    for (int h : s.hidden) out += std::to_string(h) + ".";
    out += ";";
  }
  out += "mi:" + std::to_string(mi.max_rows) + ":" + std::to_string(mi.neighbors) + ":" +
         std::to_string(mi.seed);
  return out;
}

}  // namespace

std::string baseline_key(const GroupView& g1, const GroupView& g2,
                         const std::vector<ClassifierSpec>& specs, const MiOptions& mi) {
  return sha256_hex(data::encode_public_csv(g1) + data::encode_secret_csv(g1) +
                    data::encode_public_csv(g2) + data::encode_secret_csv(g2) +
                    spec_text(specs, mi));
}

Baselines compute_baselines(const GroupView& g1, const GroupView& g2,
                            const std::vector<ClassifierSpec>& specs,
                            const MiOptions& mi) {
  check_pair(g1, g2);
  Baselines out;
  for (auto a : data::kAllAttributes) {
    const auto target = target_group(a);
    const auto& test = pick(target, g1, g2);
    const auto& train = pick(data::partner_of(target), g1, g2);
    auto& b = out.attributes[static_cast<std::size_t>(a)];
    b.attribute = a;
    b.benchmark = benchmark_accuracy(specs, train, test, a);
    b.mi_raw = subsampled_mi(test.features, test.label(a), mi_for(mi, a));
  }
  out.key = baseline_key(g1, g2, specs, mi);
  return out;
}

TradeoffReport evaluate_release(const GroupView& g1_release, const GroupView& g2_release,
                                const Baselines& baselines,
                                const std::vector<ClassifierSpec>& specs,
                                const MiOptions& mi, double delta) {
  check_pair(g1_release, g2_release);
  TradeoffReport report;
  report.delta = delta;
  report.seed = mi.seed;
  for (auto id : {GroupId::kG1, GroupId::kG2}) {
    const auto& test = pick(id, g1_release, g2_release);
    const auto& train = pick(data::partner_of(id), g1_release, g2_release);
    auto fill = [&](Attribute a, bool is_private) {
      const auto& base = baselines.at(a);
      const auto sanitized = benchmark_accuracy(specs, train, test, a);
      AttributeReport r;
      r.attribute = a;
      r.c_n = base.benchmark.accuracy;
      r.c_a = sanitized.accuracy;
      r.auroc_n = base.benchmark.auroc;
      r.auroc_a = sanitized.auroc;
      r.mi_raw = base.mi_raw;
      r.mi_sanitized = subsampled_mi(test.features, test.label(a), mi_for(mi, a));
      r.M = is_private ? privacy_leakage(r.c_a, r.c_n, r.c_r)
                       : utility_performance(r.c_a, r.c_n, r.c_r);
      r.best_model = sanitized.best;
      r.per_model_raw = base.benchmark.per_model;
      r.per_model_sanitized = sanitized.per_model;
      return r;
    };
    GroupReport& g = id == GroupId::kG1 ? report.g1 : report.g2;
    g.group = id;
    g.private_attr = fill(data::private_attribute(id), true);
    g.utility_attr = fill(data::utility_attribute(id), false);
    g.T = tradeoff(g.private_attr.M, g.utility_attr.M, delta);
  }
  return report;
}

std::string_view aux_strategy_name(AuxStrategy strategy) {
  return strategy == AuxStrategy::kAuxOnly ? "aux_only" : "aux_plus_sanitized";
}

AuxStrategy parse_aux_strategy(std::string_view name) {
  if (name == "aux_only") return AuxStrategy::kAuxOnly;
  if (name == "aux_plus_sanitized") return AuxStrategy::kAuxPlusSanitized;
  throw ConfigError("unknown aux strategy '" + std::string(name) + "'");
}

const BenchmarkResult& AuxReport::at(Attribute a) const {
  for (const auto& r : results) {
    if (r.attribute == a) return r.benchmark;
  }
  throw DataError("aux report has no entry for " + std::string(data::attribute_name(a)));
}

AuxReport aux_adversary_eval(const GroupView& aux, const GroupView& g1_release,
                             const GroupView& g2_release,
                             const std::vector<ClassifierSpec>& specs,
                             AuxStrategy strategy) {
  check_pair(g1_release, g2_release);
  for (auto a : data::kAllAttributes) {
    if (!aux.published.has(a)) {
      throw DataError("auxiliary view lacks label " + std::string(data::attribute_name(a)));
    }
  }
  AuxReport report;
  report.strategy = strategy;
  for (auto a : data::kAllAttributes) {
    const auto target = target_group(a);
    const auto& test = pick(target, g1_release, g2_release);
    BenchmarkResult result;
    if (strategy == AuxStrategy::kAuxOnly) {
      result = benchmark_accuracy(specs, aux, test, a);
    } else {
      const auto& partner = pick(data::partner_of(target), g1_release, g2_release);
      const auto pooled = data::concatenate(aux, partner.without_hidden(), GroupId::kAux);
      result = benchmark_accuracy(specs, pooled, test, a);
    }
    report.results.push_back({a, std::move(result)});
  }
  return report;
}

nlohmann::json to_json(const AuxReport& report) {
  nlohmann::json out;
  for (const auto& r : report.results) {
    out[std::string(data::attribute_name(r.attribute))] = to_json(r.benchmark);
  }
  return out;
}

}  // namespace harmonize::eval
