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

#include "harmonize/data/view_io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "harmonize/error.hpp"
#include "harmonize/text.hpp"

namespace harmonize::data {

namespace {

struct Header {
  int features = 0;
  std::vector<Attribute> labels;
  bool has_group = false;
};

DataError line_error(std::size_t line, const std::string& what) {
  return DataError("line " + std::to_string(line) + ": " + what);
}

bool is_feature_name(const std::string& name) {
  return name.size() >= 3 && name[0] == 'f' &&
         name.find_first_not_of("0123456789", 1) == std::string::npos;
}

Header parse_header(const std::vector<std::string>& fields, bool expect_group) {
  if (fields.empty() || fields[0] != "id") {
    throw line_error(1, "first column must be 'id'");
  }
  Header header;
  std::size_t i = 1;
  for (; i < fields.size() && is_feature_name(fields[i]); ++i) {
    if (fields[i] != feature_column_name(header.features)) {
      throw line_error(1, "unexpected feature column '" + fields[i] + "'");
    }
    ++header.features;
  }
  const std::size_t label_end =
      expect_group && !fields.empty() && fields.back() == "group"
          ? fields.size() - 1
          : fields.size();
  for (; i < label_end; ++i) {
    try {
      header.labels.push_back(parse_attribute(fields[i]));
    } catch (const ConfigError&) {
      throw line_error(1, "unknown column '" + fields[i] + "'");
    }
  }
  header.has_group = label_end != fields.size();
  if (expect_group && !header.has_group) {
    throw line_error(1, "last column must be 'group'");
  }
  return header;
}

std::int64_t parse_id(const std::string& text, std::size_t line) {
  std::int64_t id = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), id);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw line_error(line, "bad id '" + text + "'");
  }
  return id;
}

std::uint8_t parse_label(const std::string& text, std::size_t line) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  throw line_error(line, "label must be 0 or 1, got '" + text + "'");
}

struct ParsedRows {
  Header header;
  std::vector<std::int64_t> ids;
  std::vector<double> values;  // row-major features
  std::vector<LabelColumn> labels;
  std::optional<GroupId> group;
};

ParsedRows parse_rows(std::string_view text, bool expect_group) {
  ParsedRows parsed;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  bool have_header = false;
  std::size_t expected_fields = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      parsed.header = parse_header(fields, expect_group);
      parsed.labels.resize(parsed.header.labels.size());
      expected_fields = fields.size();
      have_header = true;
      continue;
    }
    if (fields.size() != expected_fields) {
      throw line_error(line_number, "expected " + std::to_string(expected_fields) +
                                        " fields, found " + std::to_string(fields.size()));
    }
    parsed.ids.push_back(parse_id(fields[0], line_number));
    for (int f = 0; f < parsed.header.features; ++f) {
      const auto v = parse_double(fields[static_cast<std::size_t>(1 + f)]);
      if (!v) throw line_error(line_number, "bad number in column " + feature_column_name(f));
      parsed.values.push_back(*v);
    }
    const std::size_t label_base = 1 + static_cast<std::size_t>(parsed.header.features);
    for (std::size_t l = 0; l < parsed.header.labels.size(); ++l) {
      parsed.labels[l].push_back(parse_label(fields[label_base + l], line_number));
    }
    if (parsed.header.has_group) {
      GroupId group;
      try {
        group = parse_group(fields.back());
      } catch (const DataError&) {
        throw line_error(line_number, "unknown group '" + fields.back() + "'");
      }
      if (parsed.group && *parsed.group != group) {
        throw line_error(line_number, "mixed groups in one file");
      }
      parsed.group = group;
    }
  }
  if (!have_header) throw DataError("empty CSV");
  return parsed;
}

Matrix to_matrix(const std::vector<double>& values, std::size_t rows, int cols) {
  Matrix m(static_cast<Eigen::Index>(rows), cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), c) = values[r * static_cast<std::size_t>(cols) + c];
    }
  }
  return m;
}

void append_features(std::string& out, const Matrix& features, Eigen::Index row) {
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    out.push_back(',');
    out.append(format_double(features(row, c)));
  }
}

void append_feature_header(std::string& out, int count) {
  for (int c = 0; c < count; ++c) {
    out.push_back(',');
    out.append(feature_column_name(c));
  }
}

}  // namespace

std::string feature_column_name(int index) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "f%02d", index);
  return buffer;
}

std::string encode_public_csv(const GroupView& view) {
  const auto attrs = view.published.attributes();
  std::string out = "id";
  append_feature_header(out, view.feature_count());
  for (auto a : attrs) {
    out.push_back(',');
    out.append(attribute_name(a));
  }
  out.append(",group\n");
  const std::string group(group_name(view.group));
  for (std::size_t r = 0; r < view.rows(); ++r) {
    out.append(std::to_string(view.ids[r]));
    append_features(out, view.features, static_cast<Eigen::Index>(r));
    for (auto a : attrs) {
      out.push_back(',');
      out.push_back(view.published.get(a)[r] ? '1' : '0');
    }
    out.push_back(',');
    out.append(group);
    out.push_back('\n');
  }
  return out;
}

std::string encode_secret_csv(const GroupView& view) {
  const auto attrs = view.hidden.attributes();
  std::string out = "id";
  for (auto a : attrs) {
    out.push_back(',');
    out.append(attribute_name(a));
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < view.rows(); ++r) {
    out.append(std::to_string(view.ids[r]));
    for (auto a : attrs) {
      out.push_back(',');
      out.push_back(view.hidden.get(a)[r] ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

std::filesystem::path secret_path_for(const std::filesystem::path& public_path) {
  auto path = public_path;
  path.replace_extension();
  path += ".secret.csv";
  return path;
}

void write_view(const std::filesystem::path& public_path, const GroupView& view) {
  write_file(public_path, encode_public_csv(view));
  if (!view.hidden.empty()) {
    write_file(secret_path_for(public_path), encode_secret_csv(view));
  }
}

GroupView decode_public_csv(std::string_view text) {
  auto parsed = parse_rows(text, /*expect_group=*/true);
  GroupView view;
  view.group = parsed.group.value_or(GroupId::kAux);
  view.ids = std::move(parsed.ids);
  view.features = to_matrix(parsed.values, view.ids.size(), parsed.header.features);
  for (std::size_t l = 0; l < parsed.header.labels.size(); ++l) {
    view.published.set(parsed.header.labels[l], std::move(parsed.labels[l]));
  }
  if (!parsed.group && view.rows() > 0) throw DataError("group column missing");
  return view;
}

namespace {

GroupView read_public(const std::filesystem::path& public_path) {
  GroupView view;
  try {
    view = decode_public_csv(read_file(public_path));
  } catch (const DataError& e) {
    throw DataError(public_path.string() + ": " + e.what());
  }
  for (auto a : hidden_attributes(view.group)) {
    if (view.published.has(a)) {
      throw DataError(public_path.string() + ": public file exposes hidden label " +
                      std::string(attribute_name(a)));
    }
  }
  return view;
}

void attach_secret(GroupView& view, const std::filesystem::path& public_path,
                   const std::filesystem::path& secret) {
  if (!std::filesystem::exists(secret)) {
    throw DataError("missing secret sidecar " + secret.string());
  }
  ParsedRows parsed;
  try {
    parsed = parse_rows(read_file(secret), /*expect_group=*/false);
  } catch (const DataError& e) {
    throw DataError(secret.string() + ": " + e.what());
  }
  if (parsed.header.features != 0) {
    throw DataError(secret.string() + ": sidecar must not carry features");
  }
  if (parsed.ids != view.ids) {
    throw DataError(secret.string() + ": ids do not match " + public_path.string());
  }
  for (std::size_t l = 0; l < parsed.header.labels.size(); ++l) {
    view.hidden.set(parsed.header.labels[l], std::move(parsed.labels[l]));
  }
}

}  // namespace

GroupView read_view(const std::filesystem::path& public_path, bool with_secret) {
  GroupView view = read_public(public_path);
  if (with_secret && !hidden_attributes(view.group).empty()) {
    attach_secret(view, public_path, secret_path_for(public_path));
  }
  return view;
}

GroupView read_view(const std::filesystem::path& public_path,
                    const std::filesystem::path& secret_path) {
  GroupView view = read_public(public_path);
  attach_secret(view, public_path, secret_path);
  return view;
}

std::string encode_table_csv(const LabeledTable& table) {
  std::string out = "id";
  append_feature_header(out, table.feature_count());
  out.append(",p1,u1,p2,u2\n");
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out.append(std::to_string(table.ids[r]));
    append_features(out, table.features, static_cast<Eigen::Index>(r));
    for (auto a : kAllAttributes) {
      out.push_back(',');
      out.push_back(table.label(a)[r] ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

void write_table(const std::filesystem::path& path, const LabeledTable& table) {
  write_file(path, encode_table_csv(table));
}

LabeledTable read_table(const std::filesystem::path& path) {
  ParsedRows parsed;
  try {
    parsed = parse_rows(read_file(path), /*expect_group=*/false);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (parsed.header.labels.size() != 4) {
    throw DataError(path.string() + ": table must carry p1,u1,p2,u2");
  }
  LabeledTable table;
  table.ids = std::move(parsed.ids);
  table.features = to_matrix(parsed.values, table.ids.size(), parsed.header.features);
  for (std::size_t l = 0; l < 4; ++l) {
    table.labels[static_cast<std::size_t>(parsed.header.labels[l])] =
        std::move(parsed.labels[l]);
  }
  table.validate();
  return table;
}

}  // namespace harmonize::data
