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

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "harmonize/data/partition.hpp"
#include "harmonize/data/sources.hpp"
#include "harmonize/data/view_io.hpp"
#include "harmonize/error.hpp"
#include "harmonize/eval/evaluation.hpp"
#include "harmonize/eval/projection.hpp"
#include "harmonize/fingerprint.hpp"
#include "harmonize/pipeline/experiment.hpp"
#include "harmonize/pipeline/harmonizer.hpp"
#include "harmonize/seeds.hpp"
#include "harmonize/text.hpp"

namespace harmonize::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed tags shared with the experiment suite so `evaluate` on a run and a
// suite repetition with the same seed score with the same classifiers.
constexpr std::uint64_t kTagSpecs = 20;
constexpr std::uint64_t kTagMi = 21;
constexpr std::uint64_t kTagPartition = 10;

struct DataFlags {
  bool synthetic = false;
  std::string census;
  std::size_t rows = 72000;
  int features = 16;
  int latent_factors = data::SyntheticOptions{}.latent_factors;
  double feature_noise = data::SyntheticOptions{}.feature_noise;
  double private_loading = data::SyntheticOptions{}.private_loading;
  double label_noise = data::SyntheticOptions{}.label_noise;
  std::optional<std::size_t> g1_size;
  std::optional<std::size_t> g2_size;
  std::optional<std::size_t> aux_size;
  data::Thresholds thresholds;
  std::vector<std::string> inputs;
  std::uint64_t seed = 0;
  std::string out;
};

struct TrainFlags {
  std::string variant = "uae-pupet";
  mechanism::TrainSettings settings;
  int rounds = 3;
  double validation_fraction = 0.2;
  bool cold_start = false;
  std::uint64_t seed = 0;
  std::optional<double> max_private_accuracy;
  std::optional<double> min_utility_accuracy;
};

struct EvalFlags {
  std::string run;
  std::string data;
  std::optional<std::uint64_t> seed;
  bool aux = false;
  bool pca = false;
  bool suite = false;
  int reps = 25;
  int jobs = 1;
  std::string out;
  std::size_t mi_rows = 4000;
  std::vector<double> sweep = {0.1, 0.2, 0.5, 1.0};
};

struct ReportFlags {
  std::string run;
  std::string summary;
};

void add_training_flags(CLI::App& cmd, TrainFlags& f) {
  auto& s = f.settings;
  cmd.add_option("--variant", f.variant, "Mechanism: alfr or uae-pupet")
      ->check(CLI::IsMember({"alfr", "uae-pupet"}))
      ->capture_default_str();
  cmd.add_option("--alpha", s.alpha, "Weight of the reconstruction loss")->capture_default_str();
  cmd.add_option("--lambda-p", s.lambda_p, "Weight of the adversary loss")->capture_default_str();
  cmd.add_option("--lambda-u", s.lambda_u, "Weight of the utility loss")->capture_default_str();
  cmd.add_option("--noise-sd", s.noise_sd, "Bottleneck noise sd (uae-pupet only)")
      ->capture_default_str();
  cmd.add_option("--epochs", s.epochs, "Training epochs per mechanism")->capture_default_str();
  cmd.add_option("--batch-size", s.batch_size, "Minibatch size")->capture_default_str();
  cmd.add_option("--learning-rate", s.learning_rate, "Adam learning rate")
      ->capture_default_str();
  cmd.add_option("--rounds", f.rounds, "Harmonization rounds T")->capture_default_str();
  cmd.add_option("--validation-fraction", f.validation_fraction,
                 "Share of each group held out for round selection")
      ->capture_default_str();
  cmd.add_flag("--cold-start", f.cold_start,
               "Re-initialize generators every round instead of warm-starting");
  cmd.add_option("--max-private-accuracy", f.max_private_accuracy,
                 "Only select rounds whose validation private accuracy is at most this");
  cmd.add_option("--min-utility-accuracy", f.min_utility_accuracy,
                 "Only select rounds whose validation utility accuracy is at least this");
}

pipeline::HarmonizeOptions harmonize_options(const TrainFlags& f, std::uint64_t seed) {
  pipeline::HarmonizeOptions o;
  o.variant = mechanism::parse_variant(f.variant);
  o.settings = f.settings;
  o.rounds = f.rounds;
  o.validation_fraction = f.validation_fraction;
  o.warm_start = !f.cold_start;
  o.seed = seed;
  o.validate();
  return o;
}

pipeline::SelectionCriterion selection(const TrainFlags& f) {
  return {f.max_private_accuracy, f.min_utility_accuracy};
}

data::PartitionSizes partition_sizes(const DataFlags& f, std::size_t rows) {
  data::PartitionSizes sizes;
  // Unset sizes keep the 31:31:10 proportions of the full-size dataset.
  const auto scaled = static_cast<std::size_t>(std::llround(static_cast<double>(rows) * 31.0 / 72.0));
  sizes.g1 = f.g1_size.value_or(scaled);
  sizes.g2 = f.g2_size.value_or(scaled);
  const std::size_t used = sizes.g1 + sizes.g2;
  sizes.aux = f.aux_size.value_or(rows > used ? rows - used : 0);
  return sizes;
}

json sizes_json(const data::PartitionSizes& s) {
  return {{"g1", s.g1}, {"g2", s.g2}, {"aux", s.aux}};
}

data::PartitionSizes sizes_from(const json& j) {
  return {j.at("g1").get<std::size_t>(), j.at("g2").get<std::size_t>(),
          j.at("aux").get<std::size_t>()};
}

json thresholds_json(const data::Thresholds& t) {
  return {{"income", t.income}, {"employed", t.employed}, {"white", t.white},
          {"women", t.women}};
}

json read_json(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("file not found: " + path.string());
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------- gen-data

int cmd_gen_data(const DataFlags& f, std::ostream& out, std::ostream& err) {
  if (f.synthetic && !f.census.empty()) {
    throw ConfigError("--synthetic and --census are mutually exclusive");
  }
  const fs::path dir = f.out;
  data::LabeledTable table;
  json meta;
  if (!f.census.empty()) {
    data::CensusOptions options;
    options.target_rows = f.rows;
    options.seed = f.seed;
    options.thresholds = f.thresholds;
    if (!f.inputs.empty()) options.plan.inputs = f.inputs;
    if (!fs::exists(f.census)) throw ConfigError("census file not found: " + f.census);
    err << "[gen-data] reading " << f.census << "\n";
    table = data::ingest_census(fs::path(f.census), options);
    meta["source"] = "census";
    meta["census_path"] = f.census;
    meta["census_sha256"] = sha256_file(f.census);
    meta["inputs"] = options.plan.inputs;
    meta["thresholds"] = thresholds_json(options.thresholds);
  } else {
    data::SyntheticOptions options;
    options.rows = f.rows;
    options.features = f.features;
    options.latent_factors = f.latent_factors;
    options.feature_noise = f.feature_noise;
    options.private_loading = f.private_loading;
    options.label_noise = f.label_noise;
    options.seed = f.seed;
    err << "[gen-data] generating " << f.rows << " synthetic rows\n";
    table = data::generate_synthetic(options);
    meta["source"] = "synthetic";
    meta["synthetic"] = {{"features", options.features},
                         {"latent_factors", options.latent_factors},
                         {"feature_noise", options.feature_noise},
                         {"private_loading", options.private_loading},
                         {"label_noise", options.label_noise}};
  }
  const auto sizes = partition_sizes(f, table.rows());
  const auto partition =
      data::partition_groups(table, derive_seed(f.seed, {kTagPartition}), sizes);

  data::write_table(dir / "table.csv", table);
  data::write_view(dir / "g1.csv", partition.g1);
  data::write_view(dir / "g2.csv", partition.g2);
  data::write_view(dir / "aux.csv", partition.aux);
  meta["rows"] = table.rows();
  meta["features"] = table.feature_count();
  meta["seed"] = f.seed;
  meta["sizes"] = sizes_json(sizes);
  meta["table_sha256"] = sha256_file(dir / "table.csv");
  write_json(dir / "dataset.json", meta);

  out << "wrote " << (dir / "table.csv").string() << " (" << table.rows() << " rows), g1="
      << partition.g1.rows() << " g2=" << partition.g2.rows()
      << " aux=" << partition.aux.rows() << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- harmonize

void print_report_table(std::ostream& out, const eval::TradeoffReport& r) {
  out << "group  private  c_n     c_a     M_p     utility  c_n     c_a     M_u     T\n";
  for (const auto* g : {&r.g1, &r.g2}) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "%-6s %-8s %.4f  %.4f  %.4f  %-8s %.4f  %.4f  %.4f  %.4f\n",
                  std::string(data::group_name(g->group)).c_str(),
                  std::string(data::attribute_name(g->private_attr.attribute)).c_str(),
                  g->private_attr.c_n, g->private_attr.c_a, g->private_attr.M,
                  std::string(data::attribute_name(g->utility_attr.attribute)).c_str(),
                  g->utility_attr.c_n, g->utility_attr.c_a, g->utility_attr.M, g->T);
    out << line;
  }
}

int cmd_harmonize(const std::string& data_dir, const std::string& run_dir,
                  const TrainFlags& f, std::ostream& out, std::ostream& err) {
  const fs::path data = data_dir;
  const fs::path run_path = run_dir;
  const auto options = harmonize_options(f, f.seed);
  const auto g1 = data::read_view(data / "g1.csv");
  const auto g2 = data::read_view(data / "g2.csv");
  err << "[harmonize] " << mechanism::variant_name(options.variant) << ", " << options.rounds
      << " round(s), G1 " << g1.rows() << " rows, G2 " << g2.rows() << " rows\n";

  auto run = pipeline::run_harmonization(
      g1, g2, options, [&](const pipeline::IterationRecord& rec) {
        err << "[harmonize] round " << rec.m << ": validation mean T "
            << format_double(rec.validation.mean_T()) << "\n";
      });
  pipeline::verify_chain(run);
  run.selected = pipeline::select_iteration(run, selection(f));
  const auto release = pipeline::publish(run, g1, g2);

  pipeline::write_run(run_path, run, g1, g2);
  pipeline::write_release(run_path / "release", release);

  json rounds = json::array();
  for (const auto& rec : run.records) {
    rounds.push_back({{"iteration", rec.m},
                      {"pm1_training_sha256", rec.pm1.training_data_sha256},
                      {"pm2_training_sha256", rec.pm2.training_data_sha256},
                      {"g1_snapshot_sha256", rec.g1_snapshot_sha256},
                      {"g2_snapshot_sha256", rec.g2_snapshot_sha256},
                      {"validation_mean_T", rec.validation.mean_T()}});
  }
  write_json(run_path / "run.json", {{"data", data_dir},
                                     {"seed", f.seed},
                                     {"variant", mechanism::variant_name(options.variant)},
                                     {"rounds", options.rounds},
                                     {"warm_start", options.warm_start},
                                     {"selected_iteration", run.selected},
                                     {"raw_g1_sha256", run.raw_g1_sha256},
                                     {"raw_g2_sha256", run.raw_g2_sha256},
                                     {"iterations", rounds},
                                     {"settings", pipeline::settings_json(options.settings)}});

  out << "selected iteration: " << run.selected << " of " << run.records.size() << "\n";
  out << "validation report (held-out rows):\n";
  print_report_table(out, run.record(run.selected).validation);
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

std::vector<eval::ClassifierSpec> eval_specs(std::uint64_t seed) {
  return eval::default_specs(derive_seed(seed, {kTagSpecs}));
}

eval::MiOptions eval_mi(std::uint64_t seed, std::size_t rows) {
  eval::MiOptions mi;
  mi.max_rows = rows;
  mi.seed = derive_seed(seed, {kTagMi});
  return mi;
}

std::string dataset_name(const json& meta) {
  return meta.value("source", std::string("synthetic"));
}

void write_pca(const fs::path& path, const data::GroupView& raw,
               const data::GroupView& sanitized) {
  const auto basis = eval::fit_pca(raw.features, 2);
  const auto p = data::private_attribute(raw.group);
  const auto u = data::utility_attribute(raw.group);
  std::string csv = "id,stage," + std::string(data::attribute_name(p)) + "," +
                    std::string(data::attribute_name(u)) + ",pc1,pc2\n";
  for (const auto* view : {&raw, &sanitized}) {
    const Matrix xy = eval::project(basis, view->features);
    const char* stage = view == &raw ? "raw" : "sanitized";
    const auto& lp = view->label(p);
    const auto& lu = view->label(u);
    for (std::size_t i = 0; i < view->rows(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      csv += std::to_string(view->ids[i]) + "," + stage + "," + std::to_string(lp[i]) + "," +
             std::to_string(lu[i]) + "," + format_double(xy(r, 0)) + "," +
             format_double(xy(r, 1)) + "\n";
    }
  }
  write_file(path, csv);
}

int cmd_evaluate_run(const EvalFlags& f, std::ostream& out, std::ostream& err) {
  const fs::path run_dir = f.run;
  const auto run_meta = read_json(run_dir / "run.json");
  const fs::path data = f.data.empty() ? fs::path(run_meta.at("data").get<std::string>())
                                       : fs::path(f.data);
  const auto data_meta = read_json(data / "dataset.json");
  const auto seed = f.seed.value_or(run_meta.at("seed").get<std::uint64_t>());

  const auto g1 = data::read_view(data / "g1.csv");
  const auto g2 = data::read_view(data / "g2.csv");
  const auto r1 = data::read_view(run_dir / "release" / "g1_public.csv", data / "g1.secret.csv");
  const auto r2 = data::read_view(run_dir / "release" / "g2_public.csv", data / "g2.secret.csv");
  if (r1.ids != g1.ids || r2.ids != g2.ids) {
    throw DataError("release rows do not match the dataset in " + data.string());
  }

  const auto specs = eval_specs(seed);
  const auto mi = eval_mi(seed, f.mi_rows);
  const auto key = eval::baseline_key(g1, g2, specs, mi);
  const auto cache = run_dir / "baselines.json";
  std::optional<eval::Baselines> baselines;
  if (fs::exists(cache)) {
    auto cached = eval::baselines_from_json(read_json(cache));
    if (cached.key == key) baselines = std::move(cached);
  }
  if (!baselines) {
    err << "[evaluate] computing no-privacy baselines\n";
    baselines = eval::compute_baselines(g1, g2, specs, mi);
    write_json(cache, eval::to_json(*baselines));
  } else {
    err << "[evaluate] reusing cached baselines\n";
  }

  err << "[evaluate] scoring release\n";
  pipeline::RepetitionResult result;
  result.ok = true;
  result.seed = seed;
  result.selected = run_meta.at("selected_iteration").get<int>();
  result.report = eval::evaluate_release(r1, r2, *baselines, specs, mi);
  result.report.seed = seed;
  json report = eval::to_json(result.report);
  report["selected_iteration"] = result.selected;

  if (f.aux) {
    err << "[evaluate] auxiliary adversaries\n";
    const auto aux = data::read_view(data / "aux.csv");
    for (auto strategy : {eval::AuxStrategy::kAuxOnly, eval::AuxStrategy::kAuxPlusSanitized}) {
      const auto a = eval::aux_adversary_eval(aux, r1, r2, specs, strategy);
      report[std::string(eval::aux_strategy_name(strategy))] = eval::to_json(a);
    }
  }
  write_json(run_dir / "report.json", report);

  pipeline::ExperimentSummary single;
  single.repetitions = 1;
  single.completed = 1;
  single.runs.push_back(result);
  pipeline::SweepPoint raw_point, run_point;
  run_point.lambda_p = run_meta.at("settings").at("lambda_p").get<double>();
  for (const auto* g : {&result.report.g1, &result.report.g2}) {
    for (const auto* a : {&g->private_attr, &g->utility_attr}) {
      const std::string name(data::attribute_name(a->attribute));
      raw_point.mi[name] = a->mi_raw;
      run_point.mi[name] = a->mi_sanitized;
    }
  }
  single.sweep = {raw_point, run_point};
  const auto name = dataset_name(data_meta);
  write_file(run_dir / ("fig4_" + name + "_g1.csv"), pipeline::fig4_csv(single, data::GroupId::kG1));
  write_file(run_dir / ("fig4_" + name + "_g2.csv"), pipeline::fig4_csv(single, data::GroupId::kG2));
  write_file(run_dir / ("fig5_" + name + ".csv"), pipeline::fig5_csv(single));
  if (f.pca) {
    write_pca(run_dir / "pca_g1.csv", g1, r1);
    write_pca(run_dir / "pca_g2.csv", g2, r2);
  }

  print_report_table(out, result.report);
  if (f.aux) {
    for (const char* strategy : {"aux_only", "aux_plus_sanitized"}) {
      out << strategy << ": p1 " << format_double(report[strategy]["p1"]["accuracy"].get<double>())
          << ", p2 " << format_double(report[strategy]["p2"]["accuracy"].get<double>()) << "\n";
    }
  }
  return kExitOk;
}

int cmd_evaluate_suite(const EvalFlags& f, const TrainFlags& t, std::ostream& out,
                       std::ostream& err) {
  if (f.data.empty()) throw ConfigError("--suite needs --data (a gen-data directory)");
  if (f.out.empty()) throw ConfigError("--suite needs --out");
  if (f.reps < 1) throw ConfigError("--reps must be at least 1");
  const fs::path data = f.data;
  const auto meta = read_json(data / "dataset.json");

  pipeline::ExperimentConfig config;
  config.dataset = dataset_name(meta);
  config.sizes = sizes_from(meta.at("sizes"));
  if (config.dataset == "census") {
    config.table = data::read_table(data / "table.csv");
  } else {
    const auto& s = meta.at("synthetic");
    config.synthetic.rows = meta.at("rows").get<std::size_t>();
    config.synthetic.features = s.at("features").get<int>();
    config.synthetic.latent_factors = s.at("latent_factors").get<int>();
    config.synthetic.feature_noise = s.at("feature_noise").get<double>();
    config.synthetic.private_loading = s.at("private_loading").get<double>();
    config.synthetic.label_noise = s.at("label_noise").get<double>();
  }
  config.seed0 = f.seed.value_or(meta.at("seed").get<std::uint64_t>());
  config.harmonize = harmonize_options(t, config.seed0);
  config.selection = selection(t);
  config.mi.max_rows = f.mi_rows;
  config.repetitions = f.reps;
  config.jobs = f.jobs;
  config.aux = f.aux;
  config.lambda_sweep = f.sweep;

  err << "[evaluate] suite of " << f.reps << " repetition(s) on " << config.dataset << "\n";
  const auto summary = pipeline::run_experiment_suite(
      config, [&](const std::string& line) { err << "[evaluate] " << line << "\n"; });
  pipeline::write_summary(f.out, config.dataset, summary);

  out << "repetitions: " << summary.repetitions << " (completed " << summary.completed
      << (summary.incomplete ? ", incomplete" : "") << ")\n";
  out << "metric             mean      sd\n";
  for (const char* k : {"G1.p1.M", "G1.u1.M", "T_g1", "G2.p2.M", "G2.u2.M", "T_g2"}) {
    const auto it = summary.stats.find(k);
    if (it == summary.stats.end()) continue;
    char line[96];
    std::snprintf(line, sizeof(line), "%-18s %.4f    %.4f\n", k, it->second.mean, it->second.sd);
    out << line;
  }
  return summary.completed == 0 ? kExitRuntime : kExitOk;
}

// ------------------------------------------------------------------ report

int cmd_report(const ReportFlags& f, std::ostream& out) {
  if (f.run.empty() == f.summary.empty()) {
    throw ConfigError("report needs exactly one of --run or --summary");
  }
  if (!f.summary.empty()) {
    const auto doc = read_json(f.summary);
    out << "repetitions: " << doc.at("repetitions").get<int>() << " (completed "
        << doc.at("completed").get<int>() << ")\n";
    out << "metric                       mean      sd\n";
    for (const auto& [name, s] : doc.at("stats").items()) {
      char line[128];
      std::snprintf(line, sizeof(line), "%-28s %.4f    %.4f\n", name.c_str(),
                    s.at("mean").get<double>(), s.at("sd").get<double>());
      out << line;
    }
    return kExitOk;
  }
  const fs::path run_dir = f.run;
  const auto run_meta = read_json(run_dir / "run.json");
  const int selected = run_meta.at("selected_iteration").get<int>();
  for (const auto& entry : run_meta.at("iterations")) {
    const int m = entry.at("iteration").get<int>();
    const auto report =
        eval::report_from_json(read_json(run_dir / ("iter_" + std::to_string(m)) / "report.json"));
    out << "iteration " << m << (m == selected ? " (selected)" : "") << ", validation:\n";
    print_report_table(out, report);
  }
  if (fs::exists(run_dir / "report.json")) {
    out << "release:\n";
    print_report_table(out, eval::report_from_json(read_json(run_dir / "report.json")));
  }
  return kExitOk;
}

template <typename Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const TrainingError& e) {
    err << "training error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SelectionError& e) {
    err << "selection error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const json::exception& e) {
    err << "data error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "file error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-group privacy-preserving data harmonization", "harmonize"};
  app.set_config("--config", "", "Read flag values from an INI/TOML file (command line wins)");
  app.require_subcommand(1);
  app.get_formatter()->column_width(40);

  DataFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate or ingest a dataset and partition it");
  gen_cmd->add_flag("--synthetic", gen.synthetic, "Generate synthetic data (the default source)");
  gen_cmd->add_option("--census", gen.census, "Ingest a census CSV instead of generating data");
  gen_cmd->add_option("--rows", gen.rows, "Rows to generate or sample")->capture_default_str();
  gen_cmd->add_option("--features", gen.features, "Synthetic feature count")->capture_default_str();
  gen_cmd->add_option("--latent-factors", gen.latent_factors, "Synthetic latent factor count")
      ->capture_default_str();
  gen_cmd->add_option("--feature-noise", gen.feature_noise, "Synthetic per-feature noise sd")
      ->capture_default_str();
  gen_cmd->add_option("--private-loading", gen.private_loading,
                      "Loading scale of the factors behind p1 and p2")
      ->capture_default_str();
  gen_cmd->add_option("--label-noise", gen.label_noise, "Synthetic label score noise sd")
      ->capture_default_str();
  gen_cmd->add_option("--g1-size", gen.g1_size, "G1 rows (default 31/72 of the table)");
  gen_cmd->add_option("--g2-size", gen.g2_size, "G2 rows (default 31/72 of the table)");
  gen_cmd->add_option("--aux-size", gen.aux_size, "AUX rows (default: the remainder)");
  gen_cmd->add_option("--income-threshold", gen.thresholds.income, "p1 = Income > this")
      ->capture_default_str();
  gen_cmd->add_option("--employed-threshold", gen.thresholds.employed, "u1 = Employed > this")
      ->capture_default_str();
  gen_cmd->add_option("--white-threshold", gen.thresholds.white, "p2 = White > this")
      ->capture_default_str();
  gen_cmd->add_option("--women-threshold", gen.thresholds.women, "u2 = Women > this")
      ->capture_default_str();
  gen_cmd->add_option("--inputs", gen.inputs, "Census feature columns (comma-separated)")
      ->delimiter(',');
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  std::string h_data, h_run;
  TrainFlags train;
  auto* h_cmd = app.add_subcommand("harmonize", "Train both mechanisms over T rounds and publish");
  h_cmd->add_option("--data", h_data, "Dataset directory written by gen-data")->required();
  h_cmd->add_option("--run", h_run, "Run directory to create")->required();
  add_training_flags(*h_cmd, train);
  h_cmd->add_option("--seed", train.seed, "Master seed")->capture_default_str();

  EvalFlags ev;
  TrainFlags suite_train;
  auto* e_cmd = app.add_subcommand("evaluate", "Score a release or run a repetition suite");
  e_cmd->add_option("--run", ev.run, "Run directory written by harmonize");
  e_cmd->add_option("--data", ev.data, "Dataset directory (default: the one the run used)");
  e_cmd->add_option("--seed", ev.seed, "Evaluation seed (default: the run or dataset seed)");
  e_cmd->add_flag("--aux", ev.aux, "Add the auxiliary-dataset adversary experiment");
  e_cmd->add_flag("--pca", ev.pca, "Export 2-D PCA coordinates of raw and released features");
  e_cmd->add_option("--mi-rows", ev.mi_rows, "Row cap for mutual information estimates")
      ->capture_default_str();
  e_cmd->add_flag("--suite", ev.suite, "Run full pipelines for seeds seed..seed+reps-1");
  e_cmd->add_option("--reps", ev.reps, "Suite repetitions")->capture_default_str();
  e_cmd->add_option("--jobs", ev.jobs, "Suite repetitions run concurrently")->capture_default_str();
  e_cmd->add_option("--sweep", ev.sweep, "Suite lambda_p values for the MI sweep")
      ->delimiter(',')
      ->capture_default_str();
  e_cmd->add_option("--out", ev.out, "Suite output directory");
  add_training_flags(*e_cmd, suite_train);

  ReportFlags rep;
  auto* r_cmd = app.add_subcommand("report", "Print the reports of a run or a suite summary");
  r_cmd->add_option("--run", rep.run, "Run directory");
  r_cmd->add_option("--summary", rep.summary, "summary.json written by evaluate --suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "harmonize 1.0.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitConfig;
  }

  if (gen_cmd->parsed()) return guarded([&] { return cmd_gen_data(gen, out, err); }, err);
  if (h_cmd->parsed()) {
    return guarded([&] { return cmd_harmonize(h_data, h_run, train, out, err); }, err);
  }
  if (e_cmd->parsed()) {
    return guarded(
        [&] {
          if (ev.suite) return cmd_evaluate_suite(ev, suite_train, out, err);
          if (ev.run.empty()) throw ConfigError("evaluate needs --run (or --suite)");
          return cmd_evaluate_run(ev, out, err);
        },
        err);
  }
  return guarded([&] { return cmd_report(rep, out); }, err);
}

}  // namespace harmonize::cli
