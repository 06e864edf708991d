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
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "curtail/accounting.hpp"
#include "curtail/coordinator.hpp"
#include "curtail/provisioner.hpp"
#include "curtail/trace.hpp"
#include "curtail/trainer.hpp"

namespace curtail {

enum class SignalPolicy {
  curtailment,  // provision on the hysteresis-debounced curtailment signal
  always_on,    // baseline: every site's signal is held high
};

struct SiteSpec {
  SiteId site_id;
  RegionId region;
  SitePowerModel power;
  TrainerSpec trainer;
  unsigned weight = 1;  // repeats the site in the shard deal
};

struct Scenario {
  std::string name;
  std::int64_t epoch_unix = 0;
  Seconds horizon = 86400;
  std::uint64_t seed = 0;
  SignalPolicy policy = SignalPolicy::curtailment;
  std::vector<SiteSpec> sites;  // ascending site id
  HysteresisParams hysteresis;
  RoundConfig rounds;
  std::size_t shard_count = 16;
  RowCount shard_size = 4096;
  CurtailmentConfig curtailment;
  /// Commit indices at which a site trains but fails to report.
  std::map<SiteId, std::set<std::uint64_t>> failures;

  const SiteSpec& site(const SiteId& id) const;
  std::set<RegionId> regions() const;
  /// Sets every site's data seed.
  void set_seed(std::uint64_t seed);
  /// Throws ValidationError naming the first offending field.
  void validate() const;
};

using TraceSet = std::map<RegionId, CarbonTrace>;

Scenario parse_scenario(std::istream& in);
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// The fully resolved scenario (defaults included) in the input grammar.
/// parse_scenario(echo_scenario(s)) reproduces s.
std::string echo_scenario(const Scenario& scenario);

/// Loads `<dir>/<region>.csv` for every region the scenario references.
/// Throws ValidationError("traces.<region>", ...) when a file is missing.
TraceSet load_traces(const Scenario& scenario, const std::filesystem::path& dir);

/// Cross-checks that every region has a trace starting at or before t = 0.
void check_traces(const Scenario& scenario, const TraceSet& traces);

}  // namespace curtail
