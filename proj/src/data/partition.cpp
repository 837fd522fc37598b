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

#include "harmonize/data/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "harmonize/error.hpp"

namespace harmonize::data {

Partition partition_groups(const LabeledTable& table, std::uint64_t seed,
                           const PartitionSizes& sizes) {
  const std::size_t needed = sizes.g1 + sizes.g2 + sizes.aux;
  if (sizes.g1 == 0 || sizes.g2 == 0) {
    throw ConfigError("G1 and G2 must be non-empty");
  }
  if (table.rows() < needed) {
    throw DataError("partition needs " + std::to_string(needed) +
                    " rows but the table has " + std::to_string(table.rows()));
  }
  std::vector<std::size_t> order(table.rows());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  auto slice = [&](std::size_t begin, std::size_t count) {
    std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                  order.begin() + static_cast<std::ptrdiff_t>(begin + count));
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  const auto g1_rows = slice(0, sizes.g1);
  const auto g2_rows = slice(sizes.g1, sizes.g2);
  const auto aux_rows = slice(sizes.g1 + sizes.g2, sizes.aux);

  Partition partition;
  partition.g1 = make_view(table, GroupId::kG1, g1_rows);
  partition.g2 = make_view(table, GroupId::kG2, g2_rows);
  partition.aux = make_view(table, GroupId::kAux, aux_rows);
  return partition;
}

RowSplit split_rows(std::size_t rows, double holdout_fraction,
                    std::uint64_t seed) {
  if (holdout_fraction < 0.0 || holdout_fraction >= 1.0) {
    throw ConfigError("holdout fraction must lie in [0, 1)");
  }
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto holdout =
      static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(rows)));
  RowSplit split;
  split.holdout.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(holdout));
  split.train.assign(order.begin() + static_cast<std::ptrdiff_t>(holdout), order.end());
  std::sort(split.holdout.begin(), split.holdout.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

}  // namespace harmonize::data
