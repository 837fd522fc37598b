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

#ifndef HARMONIZE_DATA_VIEW_IO_HPP_
#define HARMONIZE_DATA_VIEW_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "harmonize/data/table.hpp"

namespace harmonize::data {

// Feature column names are f00, f01, ...
std::string feature_column_name(int index);

// Public file: `id,f00..f15,<published labels in p1,u1,p2,u2 order>,group`.
// Hidden labels never appear in it; they go to a `<stem>.secret.csv` sidecar
// with columns `id,<hidden labels>`. Doubles use the shortest exact decimal
// form, so a write/read round trip is lossless.
std::string encode_public_csv(const GroupView& view);
std::string encode_secret_csv(const GroupView& view);

// "g1.csv" -> "g1.secret.csv".
std::filesystem::path secret_path_for(const std::filesystem::path& public_path);

// Writes the public file and, when the view has hidden labels, the sidecar.
void write_view(const std::filesystem::path& public_path, const GroupView& view);

// Parses a public file; with `with_secret` also reads the sidecar (which must
// exist and list the same ids in the same order). Malformed input raises
// DataError with the offending line number.
GroupView decode_public_csv(std::string_view text);
GroupView read_view(const std::filesystem::path& public_path,
                    bool with_secret = true);
// Same, with the sidecar taken from an explicit path.
GroupView read_view(const std::filesystem::path& public_path,
                    const std::filesystem::path& secret_path);

// Full table: `id,f00..,p1,u1,p2,u2`.
std::string encode_table_csv(const LabeledTable& table);
void write_table(const std::filesystem::path& path, const LabeledTable& table);
LabeledTable read_table(const std::filesystem::path& path);

}  // namespace harmonize::data

#endif  // HARMONIZE_DATA_VIEW_IO_HPP_
