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

#include "harmonize/pipeline/experiment.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "harmonize/error.hpp"
#include "harmonize/seeds.hpp"
#include "harmonize/text.hpp"

namespace harmonize::pipeline {

using data::Attribute;
using data::GroupId;
using nlohmann::json;

namespace {

enum : std::uint64_t { kTagPartition = 10, kTagSpecs = 20, kTagMi = 21 };

struct Pipeline {
  data::Partition partition;
  HarmonizationRun run;
  data::GroupView g1_release;  // sanitized, hidden labels kept for scoring
  data::GroupView g2_release;
};

Pipeline build_pipeline(const ExperimentConfig& config, std::uint64_t seed,
                        std::optional<double> lambda_p) {
  Pipeline p;
  data::LabeledTable generated;
  if (!config.table) {
    auto options = config.synthetic;
    options.seed = seed;
    generated = data::generate_synthetic(options);
  }
  const auto& table = config.table ? *config.table : generated;
  p.partition = data::partition_groups(table, derive_seed(seed, {kTagPartition}),
                                       config.sizes);
  auto options = config.harmonize;
  options.seed = seed;
  if (lambda_p) options.settings.lambda_p = *lambda_p;
  p.run = run_harmonization(p.partition.g1, p.partition.g2, options);
  p.run.selected = select_iteration(p.run, config.selection);
  const auto& rec = p.run.record(p.run.selected);
  p.g1_release = snapshot_view(p.partition.g1, rec.g1_sanitized);
  p.g2_release = snapshot_view(p.partition.g2, rec.g2_sanitized);
  return p;
}

std::vector<eval::ClassifierSpec> specs_for(const ExperimentConfig& config,
                                            std::uint64_t seed) {
  return config.specs.empty() ? eval::default_specs(derive_seed(seed, {kTagSpecs}))
                              : config.specs;
}

eval::MiOptions mi_for(const ExperimentConfig& config, std::uint64_t seed) {
  auto mi = config.mi;
  mi.seed = derive_seed(seed, {kTagMi});
  return mi;
}

std::string key(GroupId g, Attribute a, const char* field) {
  return std::string(data::group_name(g)) + "." + std::string(data::attribute_name(a)) +
         "." + field;
}

void flatten_attr(std::map<std::string, double>& out, GroupId g,
                  const eval::AttributeReport& r) {
  out[key(g, r.attribute, "c_n")] = r.c_n;
  out[key(g, r.attribute, "c_a")] = r.c_a;
  out[key(g, r.attribute, "c_r")] = r.c_r;
  out[key(g, r.attribute, "auroc_n")] = r.auroc_n;
  out[key(g, r.attribute, "auroc_a")] = r.auroc_a;
  out[key(g, r.attribute, "mi_raw")] = r.mi_raw;
  out[key(g, r.attribute, "mi_sanitized")] = r.mi_sanitized;
  out[key(g, r.attribute, "M")] = r.M;
}

json aux_json(const std::optional<eval::AuxReport>& aux) {
  return aux ? eval::to_json(*aux) : json(nullptr);
}

}  // namespace

RepetitionResult run_repetition(const ExperimentConfig& config, std::uint64_t seed,
                                const ProgressCallback& progress) {
  RepetitionResult result;
  result.seed = seed;
  try {
    const auto p = build_pipeline(config, seed, std::nullopt);
    result.selected = p.run.selected;
    const auto specs = specs_for(config, seed);
    const auto mi = mi_for(config, seed);
    const auto baselines =
        eval::compute_baselines(p.partition.g1, p.partition.g2, specs, mi);
    result.report = eval::evaluate_release(p.g1_release, p.g2_release, baselines, specs, mi);
    result.report.seed = seed;
    if (config.aux) {
      const auto& aux = p.partition.aux;
      result.aux_only = eval::aux_adversary_eval(aux, p.g1_release, p.g2_release, specs,
                                                 eval::AuxStrategy::kAuxOnly);
      result.aux_plus_sanitized = eval::aux_adversary_eval(
          aux, p.g1_release, p.g2_release, specs, eval::AuxStrategy::kAuxPlusSanitized);
      result.aux_raw_control = eval::aux_adversary_eval(
          aux, p.partition.g1, p.partition.g2, specs, eval::AuxStrategy::kAuxOnly);
    }
    result.ok = true;
    if (progress) progress("repetition seed " + std::to_string(seed) + " done");
  } catch (const Error& e) {
    result.error = e.what();
    if (progress) progress("repetition seed " + std::to_string(seed) + " failed: " + e.what());
  }
  return result;
}

Stat summarize(const std::vector<double>& values) {
  Stat s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::map<std::string, double> flatten(const RepetitionResult& result) {
  std::map<std::string, double> out;
  if (!result.ok) return out;
  const auto& r = result.report;
  for (const auto* g : {&r.g1, &r.g2}) {
    flatten_attr(out, g->group, g->private_attr);
    flatten_attr(out, g->group, g->utility_attr);
  }
  out["T_g1"] = r.g1.T;
  out["T_g2"] = r.g2.T;
  out["mean_T"] = r.mean_T();
  out["selected_iteration"] = result.selected;
  for (const auto* aux : {&result.aux_only, &result.aux_plus_sanitized,
                          &result.aux_raw_control}) {
    if (!*aux) continue;
    const std::string prefix = aux == &result.aux_raw_control
                                   ? "aux_raw_control"
                                   : std::string(eval::aux_strategy_name((*aux)->strategy));
    for (const auto& entry : (*aux)->results) {
      out[prefix + "." + std::string(data::attribute_name(entry.attribute))] =
          entry.benchmark.accuracy;
    }
  }
  return out;
}

ExperimentSummary run_experiment_suite(const ExperimentConfig& config,
                                       const ProgressCallback& progress) {
  if (config.repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (config.jobs < 1) throw ConfigError("jobs must be at least 1");
  config.harmonize.validate();

  ExperimentSummary summary;
  summary.repetitions = config.repetitions;
  summary.runs.resize(static_cast<std::size_t>(config.repetitions));

  std::mutex log_mutex;
  const ProgressCallback log = [&](const std::string& line) {
    if (!progress) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    progress(line);
  };
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < config.repetitions; r = next++) {
      summary.runs[static_cast<std::size_t>(r)] =
          run_repetition(config, config.seed0 + static_cast<std::uint64_t>(r), log);
    }
  };
  const int threads = std::min(config.jobs, config.repetitions);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::map<std::string, std::vector<double>> columns;
  for (const auto& run : summary.runs) {
    if (!run.ok) continue;
    ++summary.completed;
    for (const auto& [name, value] : flatten(run)) columns[name].push_back(value);
  }
  summary.incomplete = summary.completed != summary.repetitions;
  for (const auto& [name, values] : columns) summary.stats[name] = summarize(values);

  const auto& first = summary.runs.front();
  if (!config.lambda_sweep.empty() && first.ok) {
    SweepPoint raw;
    for (const auto* g : {&first.report.g1, &first.report.g2}) {
      for (const auto* a : {&g->private_attr, &g->utility_attr}) {
        raw.mi[std::string(data::attribute_name(a->attribute))] = a->mi_raw;
      }
    }
    summary.sweep.push_back(raw);
    for (double lambda : config.lambda_sweep) {
      SweepPoint point;
      point.lambda_p = lambda;
      try {
        if (lambda == config.harmonize.settings.lambda_p) {
          for (const auto* g : {&first.report.g1, &first.report.g2}) {
            for (const auto* a : {&g->private_attr, &g->utility_attr}) {
              point.mi[std::string(data::attribute_name(a->attribute))] = a->mi_sanitized;
            }
          }
        } else {
          const auto p = build_pipeline(config, config.seed0, lambda);
          const auto mi = mi_for(config, config.seed0);
          for (auto a : data::kAllAttributes) {
            const auto& view = eval::target_group(a) == GroupId::kG1 ? p.g1_release
                                                                      : p.g2_release;
            auto opts = mi;
            opts.seed = derive_seed(mi.seed, {static_cast<std::uint64_t>(a)});
            point.mi[std::string(data::attribute_name(a))] =
                eval::subsampled_mi(view.features, view.label(a), opts);
          }
        }
        log("sweep lambda_p=" + format_double(lambda) + " done");
      } catch (const Error& e) {
        summary.incomplete = true;
        log("sweep lambda_p=" + format_double(lambda) + " failed: " + e.what());
        continue;
      }
      summary.sweep.push_back(point);
    }
  }
  return summary;
}

json to_json(const ExperimentSummary& summary) {
  json stats = json::object();
  for (const auto& [name, s] : summary.stats) {
    stats[name] = {{"mean", s.mean}, {"sd", s.sd}, {"count", s.count}};
  }
  json runs = json::array();
  for (const auto& run : summary.runs) {
    json entry = {{"seed", run.seed}, {"ok", run.ok}};
    if (run.ok) {
      entry["selected_iteration"] = run.selected;
      entry["report"] = eval::to_json(run.report);
      entry["aux_only"] = aux_json(run.aux_only);
      entry["aux_plus_sanitized"] = aux_json(run.aux_plus_sanitized);
      entry["aux_raw_control"] = aux_json(run.aux_raw_control);
    } else {
      entry["error"] = run.error;
    }
    runs.push_back(entry);
  }
  json sweep = json::array();
  for (const auto& point : summary.sweep) {
    sweep.push_back({{"lambda_p", point.lambda_p ? json(*point.lambda_p) : json(nullptr)},
                     {"mi", point.mi}});
  }
  return {{"repetitions", summary.repetitions},
          {"completed", summary.completed},
          {"incomplete", summary.incomplete},
          {"stats", stats},
          {"runs", runs},
          {"sweep", sweep}};
}

std::string fig4_csv(const ExperimentSummary& summary, GroupId group) {
  // (model, target, stage) -> accuracies over repetitions, in first-seen order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> values;
  auto add = [&](const std::string& row, double v) {
    if (!values.count(row)) order.push_back(row);
    values[row].push_back(v);
  };
  for (const auto& run : summary.runs) {
    if (!run.ok) continue;
    const auto& g = run.report.group(group);
    for (const auto* a : {&g.private_attr, &g.utility_attr}) {
      const std::string target(data::attribute_name(a->attribute));
      for (const auto& s : a->per_model_raw) {
        add(std::string(eval::classifier_name(s.kind)) + "," + target + ",raw", s.accuracy);
      }
      for (const auto& s : a->per_model_sanitized) {
        add(std::string(eval::classifier_name(s.kind)) + "," + target + ",sanitized",
            s.accuracy);
      }
    }
  }
  std::string out = "model,target,stage,accuracy\n";
  for (const auto& row : order) {
    out += row + "," + format_double(summarize(values[row]).mean) + "\n";
  }
  return out;
}

std::string fig5_csv(const ExperimentSummary& summary) {
  std::string out = "lambda_p,target,mi\n";
  for (const auto& point : summary.sweep) {
    const std::string lambda = point.lambda_p ? format_double(*point.lambda_p) : "none";
    for (auto a : data::kAllAttributes) {
      const std::string name(data::attribute_name(a));
      const auto it = point.mi.find(name);
      if (it == point.mi.end()) continue;
      out += lambda + "," + name + "," + format_double(it->second) + "\n";
    }
  }
  return out;
}

void write_summary(const std::filesystem::path& dir, const std::string& dataset,
                   const ExperimentSummary& summary) {
  write_file(dir / "summary.json", to_json(summary).dump(2) + "\n");
  write_file(dir / ("fig4_" + dataset + "_g1.csv"), fig4_csv(summary, GroupId::kG1));
  write_file(dir / ("fig4_" + dataset + "_g2.csv"), fig4_csv(summary, GroupId::kG2));
  write_file(dir / ("fig5_" + dataset + ".csv"), fig5_csv(summary));
}

}  // namespace harmonize::pipeline
