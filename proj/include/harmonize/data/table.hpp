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

#ifndef HARMONIZE_DATA_TABLE_HPP_
#define HARMONIZE_DATA_TABLE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "harmonize/types.hpp"

namespace harmonize::data {

// The four label columns. p1/u1 are Group 1's private/utility attributes,
// p2/u2 Group 2's.
enum class Attribute : int { kP1 = 0, kU1 = 1, kP2 = 2, kU2 = 3 };

inline constexpr std::array<Attribute, 4> kAllAttributes = {
    Attribute::kP1, Attribute::kU1, Attribute::kP2, Attribute::kU2};

std::string_view attribute_name(Attribute attribute);
Attribute parse_attribute(std::string_view name);

enum class GroupId : int { kG1 = 1, kG2 = 2, kAux = 3 };

std::string_view group_name(GroupId group);
GroupId parse_group(std::string_view name);

// G1 publishes (p2, u2) and hides (p1, u1); G2 the reverse; AUX publishes all.
std::vector<Attribute> published_attributes(GroupId group);
std::vector<Attribute> hidden_attributes(GroupId group);

// The attribute a group protects and the one it wants predicted. Only defined
// for G1 and G2.
Attribute private_attribute(GroupId group);
Attribute utility_attribute(GroupId group);
GroupId partner_of(GroupId group);

// Ground-truth table: every row carries all four labels.
struct LabeledTable {
  Matrix features;                     // k x n
  std::array<LabelColumn, 4> labels;   // indexed by Attribute
  std::vector<std::int64_t> ids;

  std::size_t rows() const { return ids.size(); }
  int feature_count() const { return static_cast<int>(features.cols()); }
  const LabelColumn& label(Attribute a) const {
    return labels[static_cast<int>(a)];
  }

  // Shapes agree, labels binary, features finite. Throws DataError.
  void validate() const;
  // Every label's class-1 fraction lies in [low, high]. Throws DataError.
  void validate_balance(double low = 0.4, double high = 0.6) const;
};

// Optional label columns keyed by attribute.
class LabelSet {
 public:
  bool has(Attribute a) const { return columns_[index(a)].has_value(); }
  const LabelColumn& get(Attribute a) const;
  void set(Attribute a, LabelColumn column) { columns_[index(a)] = std::move(column); }
  void erase(Attribute a) { columns_[index(a)].reset(); }
  std::vector<Attribute> attributes() const;
  bool empty() const { return attributes().empty(); }

  bool operator==(const LabelSet&) const = default;

 private:
  static std::size_t index(Attribute a) { return static_cast<std::size_t>(a); }
  std::array<std::optional<LabelColumn>, 4> columns_;
};

// The rows of one group with the label visibility of that group.
struct GroupView {
  GroupId group = GroupId::kG1;
  std::vector<std::int64_t> ids;
  Matrix features;
  LabelSet published;
  LabelSet hidden;  // withheld from release; kept for evaluation only

  std::size_t rows() const { return ids.size(); }
  int feature_count() const { return static_cast<int>(features.cols()); }

  // Looks in published then hidden; throws DataError when absent.
  const LabelColumn& label(Attribute a) const;

  GroupView subset(std::span<const std::size_t> rows) const;
  GroupView with_features(Matrix replacement) const;
  GroupView without_hidden() const;

  bool operator==(const GroupView& other) const;
};

// Builds a view of `table` restricted to `rows` with the visibility of `group`.
GroupView make_view(const LabeledTable& table, GroupId group,
                    std::span<const std::size_t> rows);

// Concatenates rows (features and the labels both views carry).
GroupView concatenate(const GroupView& a, const GroupView& b, GroupId group);

// Selects entries of a label column.
LabelColumn take(const LabelColumn& column, std::span<const std::size_t> rows);
Matrix take_rows(const Matrix& m, std::span<const std::size_t> rows);

}  // namespace harmonize::data

#endif  // HARMONIZE_DATA_TABLE_HPP_
