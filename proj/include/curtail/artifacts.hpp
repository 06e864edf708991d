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

#include <filesystem>
#include <ostream>

#include "curtail/sim.hpp"

namespace curtail {

inline constexpr const char* kEventsFile = "events.jsonl";
inline constexpr const char* kEnergyFile = "energy.csv";
inline constexpr const char* kSummaryFile = "summary.csv";
inline constexpr const char* kModelFile = "model.bin";
inline constexpr const char* kScenarioEchoFile = "scenario.resolved.ini";

/// site_id,start,end,kwh,curtailed,emissions_g
void write_energy_csv(std::ostream& out, const std::vector<EnergyInterval>& intervals);

/// field,value rows: every RunReport field, then completion, rows_remaining
/// and final_objective. Reals are printed with round-trip precision.
void write_summary_csv(std::ostream& out, const RunResult& result);

/// Parameters as consecutive little-endian IEEE-754 doubles, nothing else.
void write_model_bin(const std::filesystem::path& path, const ModelState& model);
std::vector<double> read_model_bin(const std::filesystem::path& path);

/// Writes all run artifacts into `dir` (created if needed).
void write_artifacts(const std::filesystem::path& dir, const Scenario& scenario, const RunResult& result);

/// Removes whatever write_artifacts may have left in `dir`.
void remove_artifacts(const std::filesystem::path& dir);

/// %.17g
std::string format_real(double v);

}  // namespace curtail
