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

#include "curtail/trainer.hpp"

#include <algorithm>
#include <cmath>

namespace curtail {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Uniform in [-1, 1) from the top 53 bits.
double signed_unit(std::uint64_t bits) { return 2.0 * (static_cast<double>(bits >> 11) * 0x1p-53) - 1.0; }

std::uint64_t row_key(std::uint64_t seed, ShardIndex shard, RowCount row) {
  return mix64(mix64(mix64(seed) ^ shard) ^ row);
}

// Fills x (dim entries) and returns y.
double fill_row(std::uint64_t seed, ShardIndex shard, RowCount row, std::span<const double> truth,
                double noise_scale, double* x) {
  const std::uint64_t key = row_key(seed, shard, row);
  double y = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    x[k] = signed_unit(mix64(key + k)) * kSqrt3;
    y += x[k] * truth[k];
  }
  if (noise_scale != 0.0) y += noise_scale * signed_unit(mix64(key + truth.size())) * kSqrt3;
  return y;
}

double dot(std::span<const double> a, const double* b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

void TrainerSpec::validate() const {
  if (!(steps_per_second > 0) || !std::isfinite(steps_per_second)) {
    throw ValidationError("steps_per_second", "must be > 0");
  }
  if (micro_batch_rows < 1) throw ValidationError("micro_batch_rows", "must be >= 1");
  if (grad_accum < 1) throw ValidationError("grad_accum", "must be >= 1");
  if (local_ranks < 1) throw ValidationError("local_ranks", "must be >= 1");
  if (kind == TrainerKind::numeric && !(learning_rate > 0)) throw ValidationError("learning_rate", "must be > 0");
  if (dim < 1) throw ValidationError("dim", "must be >= 1");
  if (!(noise_scale >= 0) || !std::isfinite(noise_scale)) throw ValidationError("noise_scale", "must be >= 0");
}

std::vector<double> ground_truth(std::uint64_t data_seed, unsigned dim) {
  const std::uint64_t key = mix64(mix64(data_seed) ^ 0x7468657461737461ull);
  std::vector<double> truth(dim);
  for (unsigned k = 0; k < dim; ++k) truth[k] = signed_unit(mix64(key + k));
  return truth;
}

Row generate_row(std::uint64_t data_seed, ShardIndex shard, RowCount row, unsigned dim, double noise_scale) {
  const auto truth = ground_truth(data_seed, dim);
  Row out{std::vector<double>(dim), 0.0};
  out.y = fill_row(data_seed, shard, row, truth, noise_scale, out.x.data());
  return out;
}

double batch_objective(std::span<const double> theta, std::span<const Row> rows) {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : rows) {
    const double e = dot(theta, r.x.data()) - r.y;
    sum += e * e;
  }
  return 0.5 * sum / static_cast<double>(rows.size());
}

std::vector<double> batch_gradient(std::span<const double> theta, std::span<const Row> rows) {
  std::vector<double> g(theta.size(), 0.0);
  if (rows.empty()) return g;
  for (const auto& r : rows) {
    const double e = dot(theta, r.x.data()) - r.y;
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += e * r.x[k];
  }
  const double n = static_cast<double>(rows.size());
  for (double& v : g) v /= n;
  return g;
}

double evaluation_objective(std::span<const double> theta, const TrainerSpec& spec) {
  const auto truth = ground_truth(spec.data_seed, spec.dim);
  std::vector<double> x(spec.dim);
  double sum = 0.0;
  for (RowCount r = 0; r < kEvalRows; ++r) {
    const double y = fill_row(spec.data_seed, kEvalShard, r, truth, spec.noise_scale, x.data());
    const double e = dot(theta, x.data()) - y;
    sum += e * e;
  }
  return 0.5 * sum / static_cast<double>(kEvalRows);
}

RowCount assignment_rows(const ShardAssignment& assignment, const ShardTable& table) {
  RowCount rows = 0;
  for (const auto& e : assignment.entries) {
    if (e.shard >= table.shard_count() || e.start_row >= table.size(e.shard)) {
      throw Error("assignment for site '" + assignment.site_id + "' references complete or unknown shard " +
                  std::to_string(e.shard));
    }
    rows += table.size(e.shard) - e.start_row;
  }
  return rows;
}

std::uint64_t steps_to_exhaust(const TrainerSpec& spec, RowCount rows) {
  const RowCount per = spec.rows_per_step();
  return (rows + per - 1) / per;
}

std::uint64_t steps_for_budget(const TrainerSpec& spec, double budget_seconds) {
  if (budget_seconds < 0) throw Error("training budget must be >= 0");
  const double raw = budget_seconds * spec.steps_per_second;
  if (!(raw > 0)) return 0;
  // Tolerate representation error in products such as 600 * 0.45.
  const auto whole = static_cast<std::uint64_t>(std::floor(raw + 1e-9));
  return std::max<std::uint64_t>(whole, 1);
}

SiteUpdate train_steps(const ModelState& theta, const TrainerSpec& spec, const ShardAssignment& assignment,
                       const ShardTable& table, std::uint64_t steps, const ConsumptionHook& hook) {
  const RowCount available = assignment_rows(assignment, table);
  steps = std::min(steps, steps_to_exhaust(spec, available));

  SiteUpdate update;
  update.site_id = assignment.site_id;
  update.theta_s = theta;
  update.batches = steps;
  update.train_seconds = static_cast<double>(steps) / spec.steps_per_second;
  if (steps == 0) return update;

  const bool numeric = spec.kind == TrainerKind::numeric;
  const unsigned dim = static_cast<unsigned>(theta.params.size());
  const auto truth = numeric ? ground_truth(spec.data_seed, dim) : std::vector<double>{};
  const RowCount per_step = spec.rows_per_step();
  const unsigned ranks = spec.local_ranks;

  // Cursor over the concatenated remaining ranges of the assignment.
  std::size_t entry = 0;
  RowCount next_row = assignment.entries.front().start_row;
  std::vector<std::pair<ShardIndex, RowCount>> batch;
  std::vector<double> x(dim), grad(dim);
  std::vector<double>& params = update.theta_s.params;

  for (std::uint64_t s = 0; s < steps; ++s) {
    batch.clear();
    while (batch.size() < per_step && entry < assignment.entries.size()) {
      const ShardIndex j = assignment.entries[entry].shard;
      batch.emplace_back(j, next_row++);
      update.progress[j] = next_row;
      if (next_row >= table.size(j)) {
        ++entry;
        if (entry < assignment.entries.size()) next_row = assignment.entries[entry].start_row;
      }
    }
    update.rows_consumed += batch.size();

    if (hook) {
      // Each rank owns a stride of the step's rows.
      for (unsigned r = 0; r < ranks; ++r) {
        for (RowCount pos : stride_partition(0, batch.size(), ranks, r)) hook(batch[pos].first, batch[pos].second, r);
      }
    }
    if (!numeric) continue;

    // Rank-local gradients reduced in ascending row order, then averaged over
    // the whole step; the rank layout does not change the arithmetic.
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const auto& [j, row] : batch) {
      const double y = fill_row(spec.data_seed, j, row, truth, spec.noise_scale, x.data());
      const double e = dot(params, x.data()) - y;
      for (unsigned k = 0; k < dim; ++k) grad[k] += e * x[k];
    }
    const double n = static_cast<double>(batch.size());
    for (unsigned k = 0; k < dim; ++k) params[k] -= spec.learning_rate * (grad[k] / n);
  }
  return update;
}

SiteUpdate local_train(const ModelState& theta, const TrainerSpec& spec, const ShardAssignment& assignment,
                       const ShardTable& table, double budget_seconds, const ConsumptionHook& hook) {
  const std::uint64_t want = steps_for_budget(spec, budget_seconds);
  const RowCount available = assignment_rows(assignment, table);
  SiteUpdate update = train_steps(theta, spec, assignment, table, want, hook);
  const bool exhausted = update.rows_consumed == available;
  if (!exhausted) update.train_seconds = std::max(update.train_seconds, budget_seconds);
  return update;
}

}  // namespace curtail
