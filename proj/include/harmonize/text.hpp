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

#ifndef HARMONIZE_TEXT_HPP_
#define HARMONIZE_TEXT_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace harmonize {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Strict parse of a whole field; nullopt on empty, "NA", or trailing junk.
std::optional<double> parse_double(std::string_view text);

// Splits one CSV record on commas. Quoted fields ("a,b") are unwrapped;
// embedded newlines are not supported.
std::vector<std::string> split_csv_line(std::string_view line);

std::string read_file(const std::filesystem::path& path);
// Creates missing parent directories and truncates an existing file.
void write_file(const std::filesystem::path& path, std::string_view bytes);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace harmonize

#endif  // HARMONIZE_TEXT_HPP_
