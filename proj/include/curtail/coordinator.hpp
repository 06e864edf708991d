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

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "curtail/trainer.hpp"

namespace curtail {

enum class ModeKind { idle, solo, federated };

struct ExecutionMode {
  ModeKind kind = ModeKind::idle;
  std::vector<SiteId> sites;  // ascending

  bool operator==(const ExecutionMode&) const = default;
};

std::string_view to_string(ModeKind kind);

ExecutionMode mode_of(const std::set<SiteId>& active);

struct RoundConfig {
  Seconds delta_round = 600;
  Seconds overhead_serialize = 60;
  Seconds overhead_setup_teardown = 55;

  Seconds overhead() const { return overhead_serialize + overhead_setup_teardown; }
  Seconds training_budget() const { return delta_round - overhead(); }
  void validate() const;
};

/// theta = sum_s b_s / (sum_k b_k) * theta_s. With no work performed, returns
/// `prior` unchanged. Otherwise the result's version is prior.version + 1.
ModelState aggregate(std::span<const SiteUpdate> updates, const ModelState& prior);

/// Normalized aggregation weights b_s / sum_k b_k (empty when no work was done).
std::vector<double> aggregation_weights(std::span<const SiteUpdate> updates);

/// The coordinator's committed state: global model plus progress vector.
struct GlobalState {
  ModelState theta;
  ShardTable table;
};

/// Replaces theta and merges every progress report as one all-or-nothing step.
/// An empty report set leaves the state untouched. Throws (state unchanged)
/// if any report is invalid.
void commit(GlobalState& state, const ModelState& theta_new, std::span<const ProgressReport> reported);

struct RoundRecord {
  std::uint64_t round_index = 0;
  Seconds start = 0;
  Seconds end = 0;
  std::vector<SiteId> participants;
  std::vector<ShardAssignment> assignments;
  std::vector<SiteUpdate> updates;  // reported updates only
  ModelState aggregated;
};

struct SiteTrainer {
  SiteId site_id;
  TrainerSpec spec;
};

/// One synchronous federated round without membership changes: assign,
/// train every site for the round's training budget, aggregate and commit.
/// Sites listed in `failed` train but never report.
RoundRecord run_round(GlobalState& state, std::span<const SiteTrainer> active, const RoundConfig& cfg,
                      Seconds start, std::uint64_t round_index, const std::set<SiteId>& failed = {},
                      const ConsumptionHook& hook = {});

/// Solo training of one site over [start, until): all incomplete shards, no
/// synchronization overhead. The site's model becomes the global model.
SiteUpdate run_solo(GlobalState& state, const SiteTrainer& site, Seconds start, Seconds until,
                    const ConsumptionHook& hook = {});

}  // namespace curtail
