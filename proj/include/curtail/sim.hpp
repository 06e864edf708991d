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

#include <string>
#include <vector>

#include "curtail/accounting.hpp"
#include "curtail/coordinator.hpp"
#include "curtail/event_log.hpp"
#include "curtail/scenario.hpp"

namespace curtail {

struct RunOptions {
  /// Instrumentation: sees every consumed row, including rows of sites that
  /// later fail to report.
  ConsumptionHook on_consume;
};

enum class CompletionReason { work_done, horizon };

struct RunResult {
  EventLog log;
  std::vector<EnergyInterval> energy;
  RunReport report;
  ModelState model;
  ShardTable table;
  std::vector<RoundRecord> rounds;  // federated rounds, in order
  CompletionReason reason = CompletionReason::horizon;
  double final_objective = 0.0;
};

/// Replays the scenario's traces through provisioning, the coordinator, the
/// trainers, and the energy ledger. Deterministic: identical inputs give
/// bitwise-identical logs and models.
RunResult run(const Scenario& scenario, const TraceSet& traces, const RunOptions& options = {});

struct Verdict {
  bool ok = true;
  std::string violation;  // e.g. "debounce-up", "ledger-overlap"
  std::string detail;
  std::uint64_t seq = 0;  // offending event, when applicable
};

/// Re-verifies a finished run's log and energy ledger against the scenario
/// and traces: debounce, lifecycle, mode, shard-partition and energy
/// invariants. Returns the first violation found.
Verdict replay_check(const EventLog& log, const std::vector<EnergyInterval>& energy, const Scenario& scenario,
                     const TraceSet& traces);

}  // namespace curtail
