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

#include "harmonize/eval/report.hpp"

#include <string>

#include "harmonize/error.hpp"

namespace harmonize::eval {

using nlohmann::json;

namespace {

json model_scores(const std::vector<ModelScore>& scores) {
  json out = json::array();
  for (const auto& s : scores) {
    out.push_back({{"model", classifier_name(s.kind)},
                   {"accuracy", s.accuracy},
                   {"auroc", s.auroc}});
  }
  return out;
}

std::vector<ModelScore> model_scores_from(const json& doc) {
  std::vector<ModelScore> out;
  for (const auto& item : doc) {
    out.push_back({parse_classifier(item.at("model").get<std::string>()),
                   item.at("accuracy").get<double>(), item.at("auroc").get<double>()});
  }
  return out;
}

json attribute_json(const AttributeReport& r) {
  return {{"c_n", r.c_n},
          {"c_a", r.c_a},
          {"c_r", r.c_r},
          {"auroc_n", r.auroc_n},
          {"auroc_a", r.auroc_a},
          {"mi_raw", r.mi_raw},
          {"mi_sanitized", r.mi_sanitized},
          {"M", r.M},
          {"best_model", classifier_name(r.best_model)},
          {"per_model", {{"raw", model_scores(r.per_model_raw)},
                         {"sanitized", model_scores(r.per_model_sanitized)}}}};
}

AttributeReport attribute_from(const json& doc, data::Attribute a) {
  AttributeReport r;
  r.attribute = a;
  r.c_n = doc.at("c_n").get<double>();
  r.c_a = doc.at("c_a").get<double>();
  r.c_r = doc.at("c_r").get<double>();
  r.auroc_n = doc.at("auroc_n").get<double>();
  r.auroc_a = doc.at("auroc_a").get<double>();
  r.mi_raw = doc.at("mi_raw").get<double>();
  r.mi_sanitized = doc.at("mi_sanitized").get<double>();
  r.M = doc.at("M").get<double>();
  r.best_model = parse_classifier(doc.at("best_model").get<std::string>());
  if (doc.contains("per_model")) {
    r.per_model_raw = model_scores_from(doc.at("per_model").at("raw"));
    r.per_model_sanitized = model_scores_from(doc.at("per_model").at("sanitized"));
  }
  return r;
}

json group_json(const GroupReport& g) {
  json out;
  out[std::string(data::attribute_name(g.private_attr.attribute))] =
      attribute_json(g.private_attr);
  out[std::string(data::attribute_name(g.utility_attr.attribute))] =
      attribute_json(g.utility_attr);
  return out;
}

GroupReport group_from(const json& doc, data::GroupId id, double T) {
  GroupReport g;
  g.group = id;
  const auto p = data::private_attribute(id);
  const auto u = data::utility_attribute(id);
  g.private_attr = attribute_from(doc.at(std::string(data::attribute_name(p))), p);
  g.utility_attr = attribute_from(doc.at(std::string(data::attribute_name(u))), u);
  g.T = T;
  return g;
}

}  // namespace

json to_json(const BenchmarkResult& result) {
  return {{"accuracy", result.accuracy},
          {"auroc", result.auroc},
          {"best_model", classifier_name(result.best)},
          {"per_model", model_scores(result.per_model)}};
}

json to_json(const TradeoffReport& report) {
  return {{"G1", group_json(report.g1)},
          {"G2", group_json(report.g2)},
          {"T_g1", report.g1.T},
          {"T_g2", report.g2.T},
          {"delta", report.delta},
          {"seed", report.seed}};
}

TradeoffReport report_from_json(const json& doc) {
  try {
    TradeoffReport r;
    r.g1 = group_from(doc.at("G1"), data::GroupId::kG1, doc.at("T_g1").get<double>());
    r.g2 = group_from(doc.at("G2"), data::GroupId::kG2, doc.at("T_g2").get<double>());
    r.delta = doc.at("delta").get<double>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

json to_json(const Baselines& baselines) {
  json attrs;
  for (const auto& b : baselines.attributes) {
    json entry = to_json(b.benchmark);
    entry["mi_raw"] = b.mi_raw;
    attrs[std::string(data::attribute_name(b.attribute))] = entry;
  }
  return {{"key", baselines.key}, {"attributes", attrs}};
}

Baselines baselines_from_json(const json& doc) {
  try {
    Baselines out;
    out.key = doc.at("key").get<std::string>();
    for (auto a : data::kAllAttributes) {
      const auto& entry = doc.at("attributes").at(std::string(data::attribute_name(a)));
      auto& b = out.attributes[static_cast<std::size_t>(a)];
      b.attribute = a;
      b.mi_raw = entry.at("mi_raw").get<double>();
      b.benchmark.accuracy = entry.at("accuracy").get<double>();
      b.benchmark.auroc = entry.at("auroc").get<double>();
      b.benchmark.best = parse_classifier(entry.at("best_model").get<std::string>());
      b.benchmark.per_model = model_scores_from(entry.at("per_model"));
    }
    return out;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed baselines: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed baselines: ") + e.what());
  }
}

}  // namespace harmonize::eval
