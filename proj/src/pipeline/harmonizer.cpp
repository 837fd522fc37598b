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

#include "harmonize/pipeline/harmonizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "harmonize/data/view_io.hpp"
#include "harmonize/error.hpp"
#include "harmonize/fingerprint.hpp"
#include "harmonize/seeds.hpp"
#include "harmonize/text.hpp"

namespace harmonize::pipeline {

using data::Attribute;
using data::GroupId;
using data::GroupView;
using nlohmann::json;

namespace {

enum : std::uint64_t { kTagSplit = 1, kTagTrain = 2, kTagSanitize = 3, kTagReport = 4 };

std::string view_digest(const GroupView& view) {
  return sha256_hex(data::encode_public_csv(view));
}

std::string iteration_dir(int m) { return "iter_" + std::to_string(m); }

}  // namespace

void HarmonizeOptions::validate() const {
  settings.validate();
  if (rounds < 1) throw ConfigError("rounds must be at least 1");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation fraction must lie strictly between 0 and 1");
  }
}

const IterationRecord& HarmonizationRun::record(int m) const {
  if (m < 1 || m > static_cast<int>(records.size())) {
    throw ConfigError("no harmonization round " + std::to_string(m));
  }
  return records[static_cast<std::size_t>(m - 1)];
}

GroupView snapshot_view(const GroupView& group, const Matrix& snapshot) {
  if (snapshot.rows() != static_cast<Eigen::Index>(group.rows()) ||
      snapshot.cols() != group.features.cols()) {
    throw InternalError("snapshot shape differs from its group");
  }
  return group.with_features(snapshot);
}

HarmonizationRun run_harmonization(const GroupView& g1, const GroupView& g2,
                                   const HarmonizeOptions& options,
                                   const RoundCallback& on_round) {
  options.validate();
  if (g1.group != GroupId::kG1 || g2.group != GroupId::kG2) {
    throw ConfigError("harmonization expects a G1 view and a G2 view");
  }
  if (g1.feature_count() != g2.feature_count()) {
    throw ConfigError("G1 and G2 have different feature counts");
  }
  for (auto id : g1.ids) {
    if (std::find(g2.ids.begin(), g2.ids.end(), id) != g2.ids.end()) {
      throw ConfigError("G1 and G2 share row id " + std::to_string(id));
    }
  }

  HarmonizationRun run;
  run.options = options;
  const auto seed = options.seed;
  run.g1_split = data::split_rows(g1.rows(), options.validation_fraction,
                                  derive_seed(seed, {kTagSplit, 1}));
  run.g2_split = data::split_rows(g2.rows(), options.validation_fraction,
                                  derive_seed(seed, {kTagSplit, 2}));
  run.raw_g1_sha256 = view_digest(g1);
  run.raw_g2_sha256 = view_digest(g2);

  const auto specs = options.validation_specs.empty()
                         ? eval::default_specs(derive_seed(seed, {kTagReport}))
                         : options.validation_specs;
  eval::MiOptions mi = options.validation_mi;
  mi.seed = derive_seed(seed, {kTagReport, 1});
  const auto g1_val = g1.subset(run.g1_split.holdout);
  const auto g2_val = g2.subset(run.g2_split.holdout);
  const auto val_baselines = eval::compute_baselines(g1_val, g2_val, specs, mi);

  const auto& train1 = run.g1_split.train;
  const auto& train2 = run.g2_split.train;
  GroupView pm1_source = g2;
  std::string pm1_source_digest = run.raw_g2_sha256;

  for (int m = 1; m <= options.rounds; ++m) {
    const auto um = static_cast<std::uint64_t>(m);
    IterationRecord rec;
    rec.m = m;
    const auto* prev = run.records.empty() ? nullptr : &run.records.back();
    try {
      // PM1: protects G1's attributes as annotated on G2-side rows.
      auto s1 = options.settings;
      s1.seed = derive_seed(seed, {kTagTrain, um, 1});
      const auto src2 = pm1_source.subset(train2);
      auto pm1 = mechanism::train_mechanism(
          src2.features, src2.published.get(Attribute::kP1),
          src2.published.get(Attribute::kU1), s1, options.variant,
          options.warm_start && prev ? &prev->pm1.state : nullptr);
      rec.g1_sanitized = mechanism::sanitize(pm1.state, g1.features,
                                             derive_seed(seed, {kTagSanitize, um, 1}));
      const auto g1_snap = snapshot_view(g1, rec.g1_sanitized);
      rec.g1_snapshot_sha256 = view_digest(g1_snap);
      rec.pm1 = {std::move(pm1.state), s1, pm1_source_digest, m};
      rec.pm1_trace = std::move(pm1.trace);

      // PM2: protects G2's attributes, trained on the fresh G1 snapshot.
      auto s2 = options.settings;
      s2.seed = derive_seed(seed, {kTagTrain, um, 2});
      const auto src1 = g1_snap.subset(train1);
      auto pm2 = mechanism::train_mechanism(
          src1.features, src1.published.get(Attribute::kP2),
          src1.published.get(Attribute::kU2), s2, options.variant,
          options.warm_start && prev ? &prev->pm2.state : nullptr);
      rec.g2_sanitized = mechanism::sanitize(pm2.state, g2.features,
                                             derive_seed(seed, {kTagSanitize, um, 2}));
      const auto g2_snap = snapshot_view(g2, rec.g2_sanitized);
      rec.g2_snapshot_sha256 = view_digest(g2_snap);
      rec.pm2 = {std::move(pm2.state), s2, rec.g1_snapshot_sha256, m};
      rec.pm2_trace = std::move(pm2.trace);

      rec.validation = eval::evaluate_release(g1_snap.subset(run.g1_split.holdout),
                                              g2_snap.subset(run.g2_split.holdout),
                                              val_baselines, specs, mi);
      pm1_source = g2_snap;
      pm1_source_digest = rec.g2_snapshot_sha256;
    } catch (const TrainingError& e) {
      if (e.iteration()) throw;
      throw TrainingError(e.what(), m);
    } catch (const MetricError& e) {
      throw TrainingError(std::string("validation report failed: ") + e.what(), m);
    }
    run.records.push_back(std::move(rec));
    if (on_round) on_round(run.records.back());
  }
  return run;
}

void verify_chain(const HarmonizationRun& run) {
  const auto n = run.records.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = run.records[i];
    const std::string where = "round " + std::to_string(rec.m) + ": ";
    if (rec.pm2.training_data_sha256 != rec.g1_snapshot_sha256) {
      throw InternalError(where + "PM2 did not train on this round's G1 snapshot");
    }
    if (rec.pm2.training_data_sha256 == run.raw_g1_sha256) {
      throw InternalError(where + "PM2 trained on raw G1");
    }
    if (i == 0) {
      if (rec.pm1.training_data_sha256 != run.raw_g2_sha256) {
        throw InternalError(where + "PM1 did not start from raw G2");
      }
    } else {
      if (rec.pm1.training_data_sha256 != run.records[i - 1].g2_snapshot_sha256) {
        throw InternalError(where + "PM1 did not train on the previous G2 snapshot");
      }
      if (rec.pm1.training_data_sha256 == run.raw_g2_sha256) {
        throw InternalError(where + "PM1 trained on raw G2 after the first round");
      }
    }
  }
}

int select_iteration(const HarmonizationRun& run, const SelectionCriterion& criterion) {
  if (run.records.empty()) throw SelectionError("run has no rounds to select from");
  int best = 0;
  double best_t = 0.0;
  std::ostringstream rejected;
  for (const auto& rec : run.records) {
    const auto& v = rec.validation;
    const double p1 = v.g1.private_attr.c_a, p2 = v.g2.private_attr.c_a;
    const double u1 = v.g1.utility_attr.c_a, u2 = v.g2.utility_attr.c_a;
    bool ok = true;
    if (criterion.max_private_accuracy) {
      ok = ok && p1 <= *criterion.max_private_accuracy &&
           p2 <= *criterion.max_private_accuracy;
    }
    if (criterion.min_utility_accuracy) {
      ok = ok && u1 >= *criterion.min_utility_accuracy &&
           u2 >= *criterion.min_utility_accuracy;
    }
    if (!ok) {
      rejected << "\n  round " << rec.m << ": private accuracy " << format_double(p1)
               << " / " << format_double(p2) << ", utility accuracy "
               << format_double(u1) << " / " << format_double(u2) << ", mean T "
               << format_double(v.mean_T());
      continue;
    }
    const double t = v.mean_T();
    if (best == 0 || t < best_t) {
      best = rec.m;
      best_t = t;
    }
  }
  if (best == 0) {
    std::ostringstream msg;
    msg << "no round meets the selection constraints";
    if (criterion.max_private_accuracy) {
      msg << " (private accuracy <= " << format_double(*criterion.max_private_accuracy) << ")";
    }
    if (criterion.min_utility_accuracy) {
      msg << " (utility accuracy >= " << format_double(*criterion.min_utility_accuracy) << ")";
    }
    throw SelectionError(msg.str() + rejected.str());
  }
  return best;
}

json settings_json(const mechanism::TrainSettings& s) {
  return {{"alpha", s.alpha},
          {"lambda_p", s.lambda_p},
          {"lambda_u", s.lambda_u},
          {"noise_sd", s.noise_sd},
          {"epochs", s.epochs},
          {"batch_size", s.batch_size},
          {"learning_rate", s.learning_rate},
          {"encoder_hidden", s.architecture.encoder_hidden},
          {"bottleneck", s.architecture.bottleneck},
          {"decoder_hidden", s.architecture.decoder_hidden},
          {"head_hidden", s.architecture.head_hidden}};
}

OpenAccessRelease publish(const HarmonizationRun& run, const GroupView& g1,
                          const GroupView& g2) {
  const auto& rec = run.record(run.selected);
  OpenAccessRelease release;
  release.g1 = snapshot_view(g1, rec.g1_sanitized).without_hidden();
  release.g2 = snapshot_view(g2, rec.g2_sanitized).without_hidden();
  const auto& o = run.options;
  release.manifest = {
      {"selected_iteration", run.selected},
      {"rounds", o.rounds},
      {"variant", mechanism::variant_name(o.variant)},
      {"seed", o.seed},
      {"warm_start", o.warm_start},
      {"validation_fraction", o.validation_fraction},
      {"settings", settings_json(o.settings)},
      {"pm1_seed", rec.pm1.settings.seed},
      {"pm2_seed", rec.pm2.settings.seed},
      {"g1_rows", release.g1.rows()},
      {"g2_rows", release.g2.rows()},
      {"g1_public_sha256", view_digest(release.g1)},
      {"g2_public_sha256", view_digest(release.g2)},
      {"validation_mean_T", rec.validation.mean_T()}};
  return release;
}

void write_run(const std::filesystem::path& run_dir, const HarmonizationRun& run,
               const GroupView& g1, const GroupView& g2) {
  for (const auto& rec : run.records) {
    const auto dir = run_dir / iteration_dir(rec.m);
    mechanism::save_mechanism(dir / "pm1", rec.pm1);
    mechanism::save_mechanism(dir / "pm2", rec.pm2);
    write_file(dir / "g1_sanitized.csv",
               data::encode_public_csv(snapshot_view(g1, rec.g1_sanitized)));
    write_file(dir / "g2_sanitized.csv",
               data::encode_public_csv(snapshot_view(g2, rec.g2_sanitized)));
    json report = eval::to_json(rec.validation);
    report["iteration"] = rec.m;
    report["mean_T"] = rec.validation.mean_T();
    write_file(dir / "report.json", report.dump(2) + "\n");
  }
}

void write_release(const std::filesystem::path& release_dir,
                   const OpenAccessRelease& release) {
  for (const auto* view : {&release.g1, &release.g2}) {
    for (auto a : data::hidden_attributes(view->group)) {
      if (view->published.has(a) || view->hidden.has(a)) {
        throw InternalError("release would carry hidden label " +
                            std::string(data::attribute_name(a)));
      }
    }
  }
  write_file(release_dir / "g1_public.csv", data::encode_public_csv(release.g1));
  write_file(release_dir / "g2_public.csv", data::encode_public_csv(release.g2));
  write_file(release_dir / "manifest.json", release.manifest.dump(2) + "\n");
}

}  // namespace harmonize::pipeline
