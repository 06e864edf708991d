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
#include <functional>
#include <span>
#include <vector>

#include "curtail/datamgr.hpp"

namespace curtail {

enum class TrainerKind { numeric, throughput };

struct TrainerSpec {
  TrainerKind kind = TrainerKind::numeric;
  double steps_per_second = 0.45;  // optimizer steps per second at this site
  unsigned micro_batch_rows = 8;
  unsigned grad_accum = 4;
  unsigned local_ranks = 4;
  double learning_rate = 0.01;
  std::uint64_t data_seed = 0;
  unsigned dim = 16;
  double noise_scale = 0.0;

  RowCount rows_per_step() const {
    return static_cast<RowCount>(micro_batch_rows) * grad_accum * local_ranks;
  }
  /// Throws ValidationError naming the offending field.
  void validate() const;
};

struct ModelState {
  std::vector<double> params;
  std::uint64_t version = 0;

  static ModelState zeros(unsigned dim) { return {std::vector<double>(dim, 0.0), 0}; }
  bool operator==(const ModelState&) const = default;
};

struct SiteUpdate {
  SiteId site_id;
  ModelState theta_s;
  std::uint64_t batches = 0;  // b_s: optimizer steps completed
  ProgressReport progress;    // touched shards only: row count after training
  double train_seconds = 0.0;
  RowCount rows_consumed = 0;
};

/// Called once per consumed (shard, row), rank by rank in ascending order.
using ConsumptionHook = std::function<void(ShardIndex shard, RowCount row, unsigned rank)>;

// ---- synthetic data -------------------------------------------------------

struct Row {
  std::vector<double> x;
  double y;
};

/// Deterministic row of the synthetic regression task y = <x, theta*> + noise.
/// x entries have zero mean and unit variance; bit-identical on every IEEE-754 platform.
Row generate_row(std::uint64_t data_seed, ShardIndex shard, RowCount row, unsigned dim, double noise_scale = 0.0);

/// The ground-truth parameter vector theta* for `data_seed`.
std::vector<double> ground_truth(std::uint64_t data_seed, unsigned dim);

/// Shard index reserved for the held-out evaluation rows.
inline constexpr ShardIndex kEvalShard = 0xFFFFFFFFu;
inline constexpr RowCount kEvalRows = 1024;

/// f(theta) = 1/2 * sum (x.theta - y)^2 / n
double batch_objective(std::span<const double> theta, std::span<const Row> rows);
/// grad f(theta) = X^T (X theta - y) / n, summed in row order.
std::vector<double> batch_gradient(std::span<const double> theta, std::span<const Row> rows);

/// Objective on the fixed evaluation set of the spec's data distribution.
double evaluation_objective(std::span<const double> theta, const TrainerSpec& spec);

// ---- local training -------------------------------------------------------

/// Remaining rows covered by an assignment.
RowCount assignment_rows(const ShardAssignment& assignment, const ShardTable& table);

/// Optimizer steps needed to consume `rows` (the last step may be partial).
std::uint64_t steps_to_exhaust(const TrainerSpec& spec, RowCount rows);

/// Whole steps that fit in `budget` seconds; at least one if any time is given,
/// since the in-flight step always completes.
std::uint64_t steps_for_budget(const TrainerSpec& spec, double budget_seconds);

/// Runs exactly min(steps, steps_to_exhaust) optimizer steps from `theta`.
SiteUpdate train_steps(const ModelState& theta, const TrainerSpec& spec, const ShardAssignment& assignment,
                       const ShardTable& table, std::uint64_t steps, const ConsumptionHook& hook = {});

/// Trains for a time budget. Throws on negative budget or on an assignment
/// that references complete shards.
SiteUpdate local_train(const ModelState& theta, const TrainerSpec& spec, const ShardAssignment& assignment,
                       const ShardTable& table, double budget_seconds, const ConsumptionHook& hook = {});

}  // namespace curtail
