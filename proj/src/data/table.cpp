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

#include "harmonize/data/table.hpp"

#include <cstring>
#include <string>

#include "harmonize/error.hpp"

namespace harmonize::data {

std::string_view attribute_name(Attribute attribute) {
  switch (attribute) {
    case Attribute::kP1:
      return "p1";
    case Attribute::kU1:
      return "u1";
    case Attribute::kP2:
      return "p2";
    case Attribute::kU2:
      return "u2";
  }
  return "?";
}

Attribute parse_attribute(std::string_view name) {
  for (Attribute a : kAllAttributes) {
    if (attribute_name(a) == name) return a;
  }
  throw ConfigError("unknown attribute '" + std::string(name) + "'");
}

std::string_view group_name(GroupId group) {
  switch (group) {
    case GroupId::kG1:
      return "G1";
    case GroupId::kG2:
      return "G2";
    case GroupId::kAux:
      return "AUX";
  }
  return "?";
}

GroupId parse_group(std::string_view name) {
  for (GroupId g : {GroupId::kG1, GroupId::kG2, GroupId::kAux}) {
    if (group_name(g) == name) return g;
  }
  throw DataError("unknown group '" + std::string(name) + "'");
}

std::vector<Attribute> published_attributes(GroupId group) {
  switch (group) {
    case GroupId::kG1:
      return {Attribute::kP2, Attribute::kU2};
    case GroupId::kG2:
      return {Attribute::kP1, Attribute::kU1};
    case GroupId::kAux:
      return {kAllAttributes.begin(), kAllAttributes.end()};
  }
  return {};
}

std::vector<Attribute> hidden_attributes(GroupId group) {
  switch (group) {
    case GroupId::kG1:
      return {Attribute::kP1, Attribute::kU1};
    case GroupId::kG2:
      return {Attribute::kP2, Attribute::kU2};
    case GroupId::kAux:
      return {};
  }
  return {};
}

Attribute private_attribute(GroupId group) {
  if (group == GroupId::kG1) return Attribute::kP1;
  if (group == GroupId::kG2) return Attribute::kP2;
  throw ConfigError("AUX has no private attribute");
}

Attribute utility_attribute(GroupId group) {
  if (group == GroupId::kG1) return Attribute::kU1;
  if (group == GroupId::kG2) return Attribute::kU2;
  throw ConfigError("AUX has no utility attribute");
}

GroupId partner_of(GroupId group) {
  if (group == GroupId::kG1) return GroupId::kG2;
  if (group == GroupId::kG2) return GroupId::kG1;
  throw ConfigError("AUX has no partner group");
}

void LabeledTable::validate() const {
  const auto k = static_cast<Eigen::Index>(ids.size());
  if (features.rows() != k) {
    throw DataError("feature rows (" + std::to_string(features.rows()) +
                    ") do not match id count (" + std::to_string(k) + ")");
  }
  if (!features.allFinite()) throw DataError("features contain NaN or Inf");
  for (Attribute a : kAllAttributes) {
    const auto& column = label(a);
    if (static_cast<Eigen::Index>(column.size()) != k) {
      throw DataError("label " + std::string(attribute_name(a)) +
                      " has the wrong length");
    }
    for (auto v : column) {
      if (v > 1) {
        throw DataError("label " + std::string(attribute_name(a)) +
                        " is not binary");
      }
    }
  }
}

void LabeledTable::validate_balance(double low, double high) const {
  if (ids.empty()) throw DataError("empty table");
  for (Attribute a : kAllAttributes) {
    const auto& column = label(a);
    std::size_t ones = 0;
    for (auto v : column) ones += v;
    const double fraction = static_cast<double>(ones) / column.size();
    if (fraction < low || fraction > high) {
      throw DataError("label " + std::string(attribute_name(a)) +
                      " is unbalanced: class-1 fraction " +
                      std::to_string(fraction));
    }
  }
}

const LabelColumn& LabelSet::get(Attribute a) const {
  const auto& column = columns_[index(a)];
  if (!column) {
    throw DataError("label " + std::string(attribute_name(a)) +
                    " is not available");
  }
  return *column;
}

std::vector<Attribute> LabelSet::attributes() const {
  std::vector<Attribute> out;
  for (Attribute a : kAllAttributes) {
    if (has(a)) out.push_back(a);
  }
  return out;
}

const LabelColumn& GroupView::label(Attribute a) const {
  if (published.has(a)) return published.get(a);
  if (hidden.has(a)) return hidden.get(a);
  throw DataError(std::string(group_name(group)) + " view has no label " +
                  std::string(attribute_name(a)));
}

LabelColumn take(const LabelColumn& column, std::span<const std::size_t> rows) {
  LabelColumn out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(column.at(r));
  return out;
}

Matrix take_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i]) >= m.rows()) {
      throw InternalError("row index out of range");
    }
    out.row(static_cast<Eigen::Index>(i)) =
        m.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

GroupView GroupView::subset(std::span<const std::size_t> rows) const {
  GroupView out;
  out.group = group;
  out.ids.reserve(rows.size());
  for (auto r : rows) out.ids.push_back(ids.at(r));
  out.features = take_rows(features, rows);
  for (Attribute a : published.attributes()) {
    out.published.set(a, take(published.get(a), rows));
  }
  for (Attribute a : hidden.attributes()) {
    out.hidden.set(a, take(hidden.get(a), rows));
  }
  return out;
}

GroupView GroupView::with_features(Matrix replacement) const {
  if (replacement.rows() != features.rows()) {
    throw ConfigError("replacement features have the wrong row count");
  }
  GroupView out = *this;
  out.features = std::move(replacement);
  return out;
}

GroupView GroupView::without_hidden() const {
  GroupView out = *this;
  out.hidden = LabelSet{};
  return out;
}

bool GroupView::operator==(const GroupView& other) const {
  if (group != other.group || ids != other.ids ||
      features.rows() != other.features.rows() ||
      features.cols() != other.features.cols()) {
    return false;
  }
  if (features.size() > 0 &&
      std::memcmp(features.data(), other.features.data(),
                  sizeof(double) * static_cast<std::size_t>(features.size())) != 0) {
    return false;
  }
  return published == other.published && hidden == other.hidden;
}

GroupView make_view(const LabeledTable& table, GroupId group,
                    std::span<const std::size_t> rows) {
  GroupView view;
  view.group = group;
  view.ids.reserve(rows.size());
  for (auto r : rows) view.ids.push_back(table.ids.at(r));
  view.features = take_rows(table.features, rows);
  for (Attribute a : published_attributes(group)) {
    view.published.set(a, take(table.label(a), rows));
  }
  for (Attribute a : hidden_attributes(group)) {
    view.hidden.set(a, take(table.label(a), rows));
  }
  return view;
}

GroupView concatenate(const GroupView& a, const GroupView& b, GroupId group) {
  if (a.feature_count() != b.feature_count()) {
    throw ConfigError("cannot concatenate views with different feature counts");
  }
  GroupView out;
  out.group = group;
  out.ids = a.ids;
  out.ids.insert(out.ids.end(), b.ids.begin(), b.ids.end());
  out.features.resize(a.features.rows() + b.features.rows(), a.features.cols());
  out.features << a.features, b.features;
  for (Attribute attr : kAllAttributes) {
    const bool in_a = a.published.has(attr) || a.hidden.has(attr);
    const bool in_b = b.published.has(attr) || b.hidden.has(attr);
    if (!in_a || !in_b) continue;
    LabelColumn column = a.label(attr);
    const auto& tail = b.label(attr);
    column.insert(column.end(), tail.begin(), tail.end());
    out.published.set(attr, std::move(column));
  }
  return out;
}

}  // namespace harmonize::data
