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

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "harmonize/data/partition.hpp"
#include "harmonize/data/sources.hpp"
#include "harmonize/data/standardize.hpp"
#include "harmonize/data/table.hpp"
#include "harmonize/data/view_io.hpp"
#include "harmonize/error.hpp"
#include "harmonize/text.hpp"

namespace hz = harmonize;
namespace data = harmonize::data;
using data::Attribute;
using data::GroupId;
using hz::Matrix;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("harmonize_data_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// A census-shaped CSV with `rows` clean rows and the default column plan.
std::string census_csv(std::size_t rows, bool with_income = true) {
  data::ColumnPlan plan;
  std::vector<std::string> header = {"TractId", "State"};
  header.insert(header.end(), plan.inputs.begin(), plan.inputs.end());
  if (with_income) header.push_back("Income");
  header.insert(header.end(), {"Employed", "White", "Women"});
  std::ostringstream out;
  out << hz::join(header, ",") << "\n";
  hz::Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t r = 0; r < rows; ++r) {
    out << r << ",\"Some, State\"";
    for (std::size_t c = 0; c < plan.inputs.size(); ++c) out << "," << u(rng) * 100;
    if (with_income) out << "," << 30000 + u(rng) * 50000;
    out << "," << u(rng) * 4000 << "," << u(rng) * 140 << "," << u(rng) * 4000 << "\n";
  }
  return out.str();
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("synthetic table shape, balance and determinism") {
  const auto t = data::generate_synthetic(72000, 16, 7);
  CHECK(t.rows() == 72000);
  CHECK(t.feature_count() == 16);
  CHECK_NOTHROW(t.validate());
  CHECK_NOTHROW(t.validate_balance(0.45, 0.55));
  const auto again = data::generate_synthetic(72000, 16, 7);
  CHECK(t.features == again.features);
  CHECK(t.labels == again.labels);
  const auto other = data::generate_synthetic(72000, 16, 8);
  CHECK(t.features != other.features);
}

TEST_CASE("synthetic rejects degenerate parameters") {
  CHECK_THROWS_AS(data::generate_synthetic(50, 16, 0), hz::ConfigError);
  CHECK_THROWS_AS(data::generate_synthetic(1000, 2, 0), hz::ConfigError);
  data::SyntheticOptions o;
  o.rows = 1000;
  o.feature_noise = 0.0;
  CHECK_THROWS_AS(data::generate_synthetic(o), hz::ConfigError);
}

TEST_CASE("synthetic labels are pairwise close to independent") {
  const auto t = data::generate_synthetic(72000, 16, 3);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      std::size_t agree = 0;
      for (std::size_t i = 0; i < t.rows(); ++i) agree += t.labels[a][i] == t.labels[b][i];
      CHECK(static_cast<double>(agree) / t.rows() == doctest::Approx(0.5).epsilon(0.04));
    }
  }
}

TEST_CASE("discretization boundaries") {
  Matrix raw(4, 4);
  raw << 55000, 2000, 70, 2000,
         55001, 2001, 70.1, 2001,
         10, 10, 10, 10,
         1e6, 1e6, 100, 1e6;
  const auto labels = data::discretize_labels(raw);
  CHECK(labels[0] == hz::LabelColumn{0, 1, 0, 1});
  CHECK(labels[1] == hz::LabelColumn{0, 1, 0, 1});
  CHECK(labels[2] == hz::LabelColumn{0, 1, 0, 1});
  CHECK(labels[3] == hz::LabelColumn{0, 1, 0, 1});
}

TEST_CASE("census ingestion") {
  data::CensusOptions opt;
  opt.target_rows = 500;
  opt.balance_low = 0.0;
  opt.balance_high = 1.0;
  std::istringstream a(census_csv(800));
  const auto t = data::ingest_census(a, opt);
  CHECK(t.rows() == 500);
  CHECK(t.feature_count() == 16);
  CHECK(std::is_sorted(t.ids.begin(), t.ids.end()));
  std::istringstream b(census_csv(800));
  const auto again = data::ingest_census(b, opt);
  CHECK(t.features == again.features);
  CHECK(t.ids == again.ids);

  std::istringstream small(census_csv(400));
  CHECK_THROWS_AS(data::ingest_census(small, opt), hz::DataError);

  std::istringstream missing(census_csv(800, false));
  try {
    data::ingest_census(missing, opt);
    FAIL("expected ConfigError");
  } catch (const hz::ConfigError& e) {
    CHECK(std::string(e.what()).find("Income") != std::string::npos);
  }
}

TEST_CASE("census drops rows with missing values") {
  std::string csv = census_csv(200);
  // Blank out one Income cell: the first data row's 19th field.
  auto pos = csv.find('\n') + 1;
  std::size_t line_end = csv.find('\n', pos);
  auto fields = hz::split_csv_line(csv.substr(pos, line_end - pos));
  fields[1] = "\"Some, State\"";
  fields[18] = "";
  csv.replace(pos, line_end - pos, hz::join(fields, ","));
  data::CensusOptions opt;
  opt.target_rows = 199;
  opt.balance_low = 0.0;
  opt.balance_high = 1.0;
  std::istringstream in(csv);
  const auto t = data::ingest_census(in, opt);
  CHECK(t.rows() == 199);
  CHECK(t.ids.front() == 1);
}

TEST_CASE("partition sizes and disjointness over 50 seeds") {
  const auto table = data::generate_synthetic(3000, 16, 1);
  const data::PartitionSizes sizes{1200, 1100, 400};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = data::partition_groups(table, seed, sizes);
    REQUIRE(p.g1.rows() == 1200);
    REQUIRE(p.g2.rows() == 1100);
    REQUIRE(p.aux.rows() == 400);
    std::set<std::int64_t> seen;
    for (const auto* v : {&p.g1, &p.g2, &p.aux}) {
      for (auto id : v->ids) REQUIRE(seen.insert(id).second);
      REQUIRE(std::is_sorted(v->ids.begin(), v->ids.end()));
    }
  }
  const auto a = data::partition_groups(table, 9, sizes);
  const auto b = data::partition_groups(table, 9, sizes);
  CHECK(a.g1 == b.g1);
  CHECK(a.aux == b.aux);
  CHECK_THROWS_AS(data::partition_groups(table, 0, {2000, 2000, 10}), hz::DataError);
}

TEST_CASE("default partition of 72000 rows") {
  const auto table = data::generate_synthetic(72000, 16, 2);
  const auto p = data::partition_groups(table, 0);
  CHECK(p.g1.rows() == 31000);
  CHECK(p.g2.rows() == 31000);
  CHECK(p.aux.rows() == 10000);
}

TEST_CASE("views carry the right label visibility") {
  const auto table = data::generate_synthetic(1000, 16, 1);
  const auto p = data::partition_groups(table, 0, {300, 300, 100});
  CHECK(p.g1.published.attributes() == std::vector<Attribute>{Attribute::kP2, Attribute::kU2});
  CHECK(p.g1.hidden.attributes() == std::vector<Attribute>{Attribute::kP1, Attribute::kU1});
  CHECK(p.g2.published.attributes() == std::vector<Attribute>{Attribute::kP1, Attribute::kU1});
  CHECK(p.aux.published.attributes().size() == 4);
  CHECK(p.aux.hidden.empty());
  CHECK(p.g1.without_hidden().hidden.empty());
  CHECK_THROWS_AS(p.g1.without_hidden().label(Attribute::kP1), hz::DataError);
}

TEST_CASE("row split") {
  const auto s = data::split_rows(1000, 0.2, 3);
  CHECK(s.holdout.size() == 200);
  CHECK(s.train.size() == 800);
  std::vector<std::size_t> all = s.train;
  all.insert(all.end(), s.holdout.begin(), s.holdout.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
  CHECK_THROWS_AS(data::split_rows(10, 1.0, 0), hz::ConfigError);
}

TEST_CASE("standardizer") {
  Matrix x(2, 1);
  x << 0, 2;
  const auto s = data::fit_standardizer(x);
  CHECK(s.mean(0) == 1.0);
  CHECK(s.sd(0) == 1.0);
  const Matrix z = data::apply_standardizer(s, x);
  CHECK(z(0, 0) == -1.0);
  CHECK(z(1, 0) == 1.0);
  CHECK(data::invert_standardizer(s, z) == x);

  Matrix c(3, 2);
  c << 1, 5, 2, 5, 3, 5;
  try {
    data::fit_standardizer(c);
    FAIL("expected DataError");
  } catch (const hz::DataError& e) {
    CHECK(std::string(e.what()).find("f01") != std::string::npos);
  }
  CHECK_THROWS_AS(data::apply_standardizer(s, Matrix::Zero(2, 3)), hz::ConfigError);
}

TEST_CASE("view files round trip and keep hidden labels out of the public file") {
  const auto table = data::generate_synthetic(600, 16, 4);
  const auto p = data::partition_groups(table, 1, {200, 200, 100});
  const auto dir = scratch("views");
  data::write_view(dir / "g1.csv", p.g1);
  data::write_view(dir / "aux.csv", p.aux);
  CHECK(std::filesystem::exists(dir / "g1.secret.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "aux.secret.csv"));

  const auto text = hz::read_file(dir / "g1.csv");
  const auto header = text.substr(0, text.find('\n'));
  CHECK(header.find("p2,u2,group") != std::string::npos);
  CHECK(header.find("p1") == std::string::npos);
  CHECK(header.find("u1") == std::string::npos);

  CHECK(data::read_view(dir / "g1.csv") == p.g1);
  CHECK(data::read_view(dir / "aux.csv") == p.aux);
  CHECK(data::read_view(dir / "g1.csv", false) == p.g1.without_hidden());
  CHECK(data::read_view(dir / "g1.csv", dir / "g1.secret.csv") == p.g1);

  std::filesystem::remove(dir / "g1.secret.csv");
  CHECK_THROWS_AS(data::read_view(dir / "g1.csv"), hz::DataError);
}

TEST_CASE("malformed view rows report their line") {
  const auto table = data::generate_synthetic(300, 16, 4);
  const auto p = data::partition_groups(table, 1, {100, 100, 50});
  auto text = data::encode_public_csv(p.g2);
  // Corrupt the third data line.
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) pos = text.find('\n', pos) + 1;
  text.insert(pos, "7,abc,");
  try {
    data::decode_public_csv(text);
    FAIL("expected DataError");
  } catch (const hz::DataError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("table file round trip") {
  const auto table = data::generate_synthetic(300, 16, 6);
  const auto dir = scratch("table");
  data::write_table(dir / "table.csv", table);
  const auto back = data::read_table(dir / "table.csv");
  CHECK(back.features == table.features);
  CHECK(back.labels == table.labels);
  CHECK(back.ids == table.ids);
}

}  // TEST_SUITE
