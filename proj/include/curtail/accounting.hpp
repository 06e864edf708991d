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
#include <vector>

#include "curtail/trace.hpp"

namespace curtail {

struct SitePowerModel {
  SiteId site_id;
  double power_kw = 2.0;
  /// Fraction of power_kw drawn during provisioning and round overhead.
  double overhead_power_fraction = 1.0;
};

struct EnergyInterval {
  SiteId site_id;
  Seconds start;
  Seconds end;
  double energy_kwh;
  bool curtailed;
  double emissions_g;
};

struct RunCounters {
  Seconds wall_clock_s = 0;
  double training_s = 0.0;
  double overhead_s = 0.0;
  std::uint64_t rounds = 0;
  std::uint64_t steps_total = 0;
};

struct RunReport {
  double total_energy_kwh = 0.0;
  double curtailed_fraction = 0.0;
  double total_emissions_g = 0.0;
  Seconds wall_clock_s = 0;
  double training_s = 0.0;
  double overhead_s = 0.0;
  std::uint64_t rounds = 0;
  std::uint64_t steps_total = 0;
};

/// Append-only per-site energy record. Every interval lies inside one
/// constant-(curtailment state, MOER) segment of the site's region trace.
class EnergyLedger {
 public:
  /// Appends [start, end) drawn at `power_kw`, split at every trace sample.
  /// Throws on empty/inverted intervals and on overlap with the site's earlier intervals.
  void record_interval(const SiteId& site, Seconds start, Seconds end, double power_kw, const CarbonTrace& trace,
                       const CurtailmentConfig& cfg);

  const std::vector<EnergyInterval>& intervals() const { return intervals_; }

 private:
  std::vector<EnergyInterval> intervals_;
  std::map<SiteId, std::vector<std::pair<Seconds, Seconds>>> spans_;
};

RunReport finalize(const std::vector<EnergyInterval>& intervals, const RunCounters& counters);
inline RunReport finalize(const EnergyLedger& ledger, const RunCounters& counters) {
  return finalize(ledger.intervals(), counters);
}

}  // namespace curtail
