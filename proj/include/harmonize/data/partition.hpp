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

#ifndef HARMONIZE_DATA_PARTITION_HPP_
#define HARMONIZE_DATA_PARTITION_HPP_

#include <cstdint>

#include "harmonize/data/table.hpp"

namespace harmonize::data {

struct PartitionSizes {
  std::size_t g1 = 31000;
  std::size_t g2 = 31000;
  std::size_t aux = 10000;
};

struct Partition {
  GroupView g1;
  GroupView g2;
  GroupView aux;
};

// Uniform random disjoint assignment of table rows to G1, G2 and AUX (rows
// beyond the three sizes are left out). Each view keeps its rows in table
// order. Throws DataError when the table is too small.
Partition partition_groups(const LabeledTable& table, std::uint64_t seed,
                           const PartitionSizes& sizes = {});

// Seeded split of [0, rows) into a training part and a held-out part of
// round(rows * holdout_fraction) indices. Both parts are sorted.
struct RowSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> holdout;
};
RowSplit split_rows(std::size_t rows, double holdout_fraction,
                    std::uint64_t seed);

}  // namespace harmonize::data

#endif  // HARMONIZE_DATA_PARTITION_HPP_
