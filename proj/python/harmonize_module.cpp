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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <string>
#include <vector>

#include "harmonize/data/partition.hpp"
#include "harmonize/data/sources.hpp"
#include "harmonize/data/view_io.hpp"
#include "harmonize/error.hpp"
#include "harmonize/eval/evaluation.hpp"
#include "harmonize/eval/metrics.hpp"
#include "harmonize/eval/mutual_info.hpp"
#include "harmonize/mechanism/mechanism.hpp"
#include "harmonize/mechanism/persist.hpp"
#include "harmonize/pipeline/experiment.hpp"

namespace py = pybind11;
namespace hz = harmonize;
using hz::Matrix;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Labels = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

hz::LabelColumn to_labels(const Labels& a) {
  if (a.ndim() != 1) throw hz::ConfigError("labels must be one-dimensional");
  return hz::LabelColumn(a.data(), a.data() + a.size());
}

std::vector<double> to_scores(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw hz::ConfigError("scores must be one-dimensional");
  return std::vector<double>(a.data(), a.data() + a.size());
}

Labels from_labels(const hz::LabelColumn& column) {
  Labels out(static_cast<py::ssize_t>(column.size()));
  std::copy(column.begin(), column.end(), out.mutable_data());
  return out;
}

py::dict table_dict(const hz::data::LabeledTable& t) {
  py::dict labels;
  for (auto a : hz::data::kAllAttributes) {
    labels[py::str(std::string(hz::data::attribute_name(a)))] = from_labels(t.label(a));
  }
  py::dict out;
  out["features"] = RowMatrix(t.features);
  out["labels"] = labels;
  out["ids"] = t.ids;
  return out;
}

hz::mechanism::TrainSettings settings_from(const py::kwargs& kw) {
  hz::mechanism::TrainSettings s;
  for (auto item : kw) {
    const auto key = item.first.cast<std::string>();
    const auto& v = item.second;
    if (key == "alpha") s.alpha = v.cast<double>();
    else if (key == "lambda_p") s.lambda_p = v.cast<double>();
    else if (key == "lambda_u") s.lambda_u = v.cast<double>();
    else if (key == "noise_sd") s.noise_sd = v.cast<double>();
    else if (key == "epochs") s.epochs = v.cast<int>();
    else if (key == "batch_size") s.batch_size = v.cast<int>();
    else if (key == "learning_rate") s.learning_rate = v.cast<double>();
    else if (key == "seed") s.seed = v.cast<std::uint64_t>();
    else throw hz::ConfigError("unknown training setting '" + key + "'");
  }
  s.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-group privacy-preserving data harmonization";

  auto base = py::register_exception<hz::Error>(m, "Error");
  py::register_exception<hz::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<hz::DataError>(m, "DataError", base.ptr());
  py::register_exception<hz::MetricError>(m, "MetricError", base.ptr());
  py::register_exception<hz::SelectionError>(m, "SelectionError", base.ptr());
  py::register_exception<hz::TrainingError>(m, "TrainingError", base.ptr());
  py::register_exception<hz::InternalError>(m, "InternalError", base.ptr());

  m.def(
      "generate_synthetic",
      [](std::size_t rows, int features, std::uint64_t seed) {
        return table_dict(hz::data::generate_synthetic(rows, features, seed));
      },
      py::arg("rows") = 72000, py::arg("features") = 16, py::arg("seed") = 0,
      "Synthetic table as {'features', 'labels': {p1, u1, p2, u2}, 'ids'}.");

  m.def(
      "read_table", [](const std::filesystem::path& p) { return table_dict(hz::data::read_table(p)); },
      py::arg("path"));

  m.def(
      "accuracy",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p, const Labels& y) {
        return hz::eval::accuracy(to_scores(p), to_labels(y));
      },
      py::arg("probabilities"), py::arg("labels"));
  m.def(
      "auroc",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& s, const Labels& y) {
        return hz::eval::auroc(to_scores(s), to_labels(y));
      },
      py::arg("scores"), py::arg("labels"));
  m.def("privacy_leakage", &hz::eval::privacy_leakage, py::arg("c_a"), py::arg("c_n"),
        py::arg("c_r") = hz::eval::kChanceAccuracy);
  m.def("utility_performance", &hz::eval::utility_performance, py::arg("c_a"), py::arg("c_n"),
        py::arg("c_r") = hz::eval::kChanceAccuracy);
  m.def("tradeoff", &hz::eval::tradeoff, py::arg("m_p"), py::arg("m_u"),
        py::arg("delta") = hz::eval::kTradeoffDelta);
  m.def(
      "estimate_mi",
      [](const Matrix& x, const Labels& y, int k, bool clamp) {
        const auto labels = to_labels(y);
        return clamp ? hz::eval::estimate_mi(x, labels, k)
                     : hz::eval::estimate_mi_unclamped(x, labels, k);
      },
      py::arg("features"), py::arg("labels"), py::arg("neighbors") = 3, py::arg("clamp") = true,
      "Nearest-neighbour I(X; Y) in nats.");

  py::class_<hz::mechanism::MechanismRecord>(m, "Mechanism")
      .def_property_readonly("variant",
                             [](const hz::mechanism::MechanismRecord& r) {
                               return std::string(hz::mechanism::variant_name(r.state.variant));
                             })
      .def_property_readonly("input_dim",
                             [](const hz::mechanism::MechanismRecord& r) { return r.state.input_dim(); })
      .def(
          "sanitize",
          [](const hz::mechanism::MechanismRecord& r, const Matrix& x, std::uint64_t seed) {
            return RowMatrix(hz::mechanism::sanitize(r.state, x, seed));
          },
          py::arg("features"), py::arg("seed") = 0)
      .def(
          "save",
          [](const hz::mechanism::MechanismRecord& r, const std::filesystem::path& dir) {
            hz::mechanism::save_mechanism(dir, r);
          },
          py::arg("directory"))
      .def_readonly("training_data_sha256", &hz::mechanism::MechanismRecord::training_data_sha256);

  m.def(
      "train_mechanism",
      [](const Matrix& x, const Labels& p, const Labels& u, const std::string& variant,
         const py::kwargs& kw) {
        const auto settings = settings_from(kw);
        hz::mechanism::MechanismRecord r;
        {
          py::gil_scoped_release release;
          r.state = hz::mechanism::train_mechanism(x, to_labels(p), to_labels(u), settings,
                                                   hz::mechanism::parse_variant(variant))
                        .state;
        }
        r.settings = settings;
        return r;
      },
      py::arg("features"), py::arg("private_labels"), py::arg("utility_labels"),
      py::arg("variant") = "uae-pupet",
      "Trains one mechanism; keyword settings: alpha, lambda_p, lambda_u, noise_sd, epochs, "
      "batch_size, learning_rate, seed.");
  m.def("load_mechanism", &hz::mechanism::load_mechanism, py::arg("directory"));

  m.def(
      "run_repetition",
      [](std::size_t rows, int rounds, std::uint64_t seed, bool aux, const py::kwargs& kw) {
        hz::pipeline::ExperimentConfig c;
        c.synthetic.rows = rows;
        const double scale = static_cast<double>(rows) / 72000.0;
        c.sizes = {static_cast<std::size_t>(31000 * scale), static_cast<std::size_t>(31000 * scale),
                   static_cast<std::size_t>(10000 * scale)};
        c.harmonize.rounds = rounds;
        c.harmonize.settings = settings_from(kw);
        c.aux = aux;
        hz::pipeline::RepetitionResult r;
        {
          py::gil_scoped_release release;
          r = hz::pipeline::run_repetition(c, seed);
        }
        if (!r.ok) throw hz::TrainingError(r.error);
        py::dict out;
        out["selected_iteration"] = r.selected;
        out["report"] = py::module_::import("json").attr("loads")(hz::eval::to_json(r.report).dump());
        py::dict flat;
        for (const auto& [k, v] : hz::pipeline::flatten(r)) flat[py::str(k)] = v;
        out["metrics"] = flat;
        return out;
      },
      py::arg("rows") = 72000, py::arg("rounds") = 1, py::arg("seed") = 0, py::arg("aux") = false,
      "Full synthetic pipeline for one seed: data, harmonization, release, evaluation.");
}
