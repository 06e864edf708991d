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

#include "curtail/coordinator.hpp"

#include <algorithm>

namespace curtail {

std::string_view to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::idle: return "idle";
    case ModeKind::solo: return "solo";
    case ModeKind::federated: return "federated";
  }
  return "?";
}

ExecutionMode mode_of(const std::set<SiteId>& active) {
  ExecutionMode mode;
  mode.sites.assign(active.begin(), active.end());
  if (active.size() == 1) {
    mode.kind = ModeKind::solo;
  } else if (active.size() >= 2) {
    mode.kind = ModeKind::federated;
  }
  return mode;
}

void RoundConfig::validate() const {
  if (overhead_serialize < 0) throw ValidationError("rounds.overhead_serialize", "must be >= 0");
  if (overhead_setup_teardown < 0) throw ValidationError("rounds.overhead_setup_teardown", "must be >= 0");
  if (delta_round <= overhead()) {
    throw ValidationError("rounds.delta_round", "must exceed overhead_serialize + overhead_setup_teardown");
  }
}

std::vector<double> aggregation_weights(std::span<const SiteUpdate> updates) {
  std::uint64_t total = 0;
  for (const auto& u : updates) total += u.batches;
  std::vector<double> w;
  if (total == 0) return w;
  for (const auto& u : updates) w.push_back(static_cast<double>(u.batches) / static_cast<double>(total));
  return w;
}

ModelState aggregate(std::span<const SiteUpdate> updates, const ModelState& prior) {
  if (updates.empty()) throw Error("aggregate: no updates");
  const std::size_t dim = prior.params.size();
  for (const auto& u : updates) {
    if (u.theta_s.params.size() != dim) throw Error("aggregate: dimension mismatch from site '" + u.site_id + "'");
  }
  const auto weights = aggregation_weights(updates);
  if (weights.empty()) return prior;

  ModelState out{std::vector<double>(dim, 0.0), prior.version + 1};
  for (std::size_t s = 0; s < updates.size(); ++s) {
    const auto& p = updates[s].theta_s.params;
    for (std::size_t i = 0; i < dim; ++i) out.params[i] += weights[s] * p[i];
  }
  return out;
}

void commit(GlobalState& state, const ModelState& theta_new, std::span<const ProgressReport> reported) {
  if (reported.empty()) return;
  if (theta_new.params.size() != state.theta.params.size()) throw Error("commit: model dimension mismatch");
  ShardTable next = state.table;
  for (const auto& r : reported) next.merge_progress(r);
  // Nothing below can throw.
  state.table = std::move(next);
  state.theta = theta_new;
}

RoundRecord run_round(GlobalState& state, std::span<const SiteTrainer> active, const RoundConfig& cfg,
                      Seconds start, std::uint64_t round_index, const std::set<SiteId>& failed,
                      const ConsumptionHook& hook) {
  cfg.validate();
  if (active.size() < 2) throw Error("run_round: federated mode needs at least two sites");
  RoundRecord rec;
  rec.round_index = round_index;
  rec.start = start;
  rec.end = start + cfg.delta_round;
  for (const auto& s : active) rec.participants.push_back(s.site_id);
  rec.assignments = assign_shards(state.table, std::span<const SiteId>(rec.participants));
  if (rec.assignments.empty()) throw Error("run_round: no incomplete shards");

  const double budget = static_cast<double>(cfg.training_budget());
  std::vector<ProgressReport> reports;
  for (std::size_t i = 0; i < active.size(); ++i) {
    SiteUpdate u = local_train(state.theta, active[i].spec, rec.assignments[i], state.table, budget, hook);
    if (failed.contains(u.site_id)) continue;
    reports.push_back(u.progress);
    rec.updates.push_back(std::move(u));
  }
  rec.aggregated = rec.updates.empty() ? state.theta : aggregate(rec.updates, state.theta);
  commit(state, rec.aggregated, reports);
  return rec;
}

SiteUpdate run_solo(GlobalState& state, const SiteTrainer& site, Seconds start, Seconds until,
                    const ConsumptionHook& hook) {
  if (until < start) throw Error("run_solo: until precedes start");
  const SiteId ids[] = {site.site_id};
  const auto assignments = assign_shards(state.table, std::span<const SiteId>(ids));
  if (assignments.empty()) return SiteUpdate{site.site_id, state.theta, 0, {}, 0.0, 0};
  SiteUpdate u = local_train(state.theta, site.spec, assignments.front(), state.table,
                             static_cast<double>(until - start), hook);
  if (u.batches > 0) {
    ModelState next = u.theta_s;
    next.version = state.theta.version + 1;
    const ProgressReport reports[] = {u.progress};
    commit(state, next, reports);
  }
  return u;
}

}  // namespace curtail
