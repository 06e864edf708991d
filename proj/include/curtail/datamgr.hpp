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

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "curtail/common.hpp"

namespace curtail {

using ShardIndex = std::uint32_t;
using RowCount = std::uint64_t;

/// Rows consumed per shard, keyed by shard index.
using ProgressReport = std::map<ShardIndex, RowCount>;

struct ShardAssignment {
  struct Entry {
    ShardIndex shard;
    RowCount start_row;
    bool operator==(const Entry&) const = default;
  };
  SiteId site_id;
  std::vector<Entry> entries;

  bool operator==(const ShardAssignment&) const = default;
};

/// Shard sizes and the committed progress vector p.
class ShardTable {
 public:
  ShardTable() = default;
  explicit ShardTable(std::vector<RowCount> shard_sizes);
  static ShardTable uniform(std::size_t shard_count, RowCount shard_size);

  std::size_t shard_count() const { return sizes_.size(); }
  const std::vector<RowCount>& sizes() const { return sizes_; }
  const std::vector<RowCount>& progress() const { return progress_; }
  RowCount size(ShardIndex j) const { return sizes_.at(j); }
  RowCount progress(ShardIndex j) const { return progress_.at(j); }
  bool complete(ShardIndex j) const { return progress_.at(j) >= sizes_.at(j); }

  RowCount remaining_rows() const;
  RowCount total_rows() const;

  /// p_j <- max(p_j, reported_j). All-or-nothing: on error the table is unchanged.
  void merge_progress(const ProgressReport& reported);

  bool operator==(const ShardTable&) const = default;

 private:
  std::vector<RowCount> sizes_;
  std::vector<RowCount> progress_;
};

struct SiteWeight {
  SiteId site_id;
  unsigned weight = 1;
};

/// Deals incomplete shards (descending progress, ties by ascending index)
/// round-robin over `sites` in the order given. Returns one assignment per site,
/// in site order; empty if no work remains.
std::vector<ShardAssignment> assign_shards(const ShardTable& table, std::span<const SiteId> sites);

/// Weighted variant: a site of weight w appears w times per deal cycle.
std::vector<ShardAssignment> assign_shards(const ShardTable& table, std::span<const SiteWeight> sites);

/// Rows r in [start_row, end_row) with (r - start_row) % num_ranks == rank.
std::vector<RowCount> stride_partition(RowCount start_row, RowCount end_row, unsigned num_ranks, unsigned rank);

}  // namespace curtail
