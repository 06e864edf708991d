// Copyright 2026 The curtailsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "curtail/datamgr.hpp"

#include <algorithm>
#include <numeric>

namespace curtail {

ShardTable::ShardTable(std::vector<RowCount> shard_sizes)
    : sizes_(std::move(shard_sizes)), progress_(sizes_.size(), 0) {
  if (sizes_.empty()) throw Error("shard table needs at least one shard");
  for (RowCount s : sizes_) {
    if (s < 1) throw Error("shard sizes must be >= 1");
  }
}

ShardTable ShardTable::uniform(std::size_t shard_count, RowCount shard_size) {
  return ShardTable(std::vector<RowCount>(shard_count, shard_size));
}

RowCount ShardTable::remaining_rows() const {
  RowCount total = 0;
  for (std::size_t j = 0; j < sizes_.size(); ++j) total += sizes_[j] - progress_[j];
  return total;
}

RowCount ShardTable::total_rows() const { return std::accumulate(sizes_.begin(), sizes_.end(), RowCount{0}); }

void ShardTable::merge_progress(const ProgressReport& reported) {
  for (const auto& [j, rows] : reported) {
    if (j >= sizes_.size()) throw Error("progress report names unknown shard " + std::to_string(j));
    if (rows > sizes_[j]) {
      throw Error("progress report for shard " + std::to_string(j) + " exceeds shard size (" +
                  std::to_string(rows) + " > " + std::to_string(sizes_[j]) + ")");
    }
  }
  for (const auto& [j, rows] : reported) progress_[j] = std::max(progress_[j], rows);
}

std::vector<ShardAssignment> assign_shards(const ShardTable& table, std::span<const SiteWeight> sites) {
  if (sites.empty()) throw Error("assign_shards: empty active set");
  std::vector<std::size_t> deal;
  unsigned max_weight = 0;
  for (const auto& s : sites) {
    if (s.weight < 1) throw Error("assign_shards: site weight must be >= 1");
    max_weight = std::max(max_weight, s.weight);
  }
  for (unsigned pass = 0; pass < max_weight; ++pass) {
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if (sites[i].weight > pass) deal.push_back(i);
    }
  }

  std::vector<ShardIndex> pending;
  for (ShardIndex j = 0; j < table.shard_count(); ++j) {
    if (!table.complete(j)) pending.push_back(j);
  }
  if (pending.empty()) return {};
  std::stable_sort(pending.begin(), pending.end(),
                   [&](ShardIndex a, ShardIndex b) { return table.progress(a) > table.progress(b); });

  std::vector<ShardAssignment> out;
  for (const auto& s : sites) out.push_back({s.site_id, {}});
  for (std::size_t k = 0; k < pending.size(); ++k) {
    const ShardIndex j = pending[k];
    out[deal[k % deal.size()]].entries.push_back({j, table.progress(j)});
  }
  return out;
}

std::vector<ShardAssignment> assign_shards(const ShardTable& table, std::span<const SiteId> sites) {
  std::vector<SiteWeight> weighted;
  for (const auto& s : sites) weighted.push_back({s, 1});
  return assign_shards(table, std::span<const SiteWeight>(weighted));
}

std::vector<RowCount> stride_partition(RowCount start_row, RowCount end_row, unsigned num_ranks, unsigned rank) {
  if (num_ranks == 0 || rank >= num_ranks) throw Error("stride_partition: rank out of range");
  if (end_row < start_row) throw Error("stride_partition: inverted range");
  std::vector<RowCount> rows;
  for (RowCount r = start_row + rank; r < end_row; r += num_ranks) rows.push_back(r);
  return rows;
}

}  // namespace curtail
