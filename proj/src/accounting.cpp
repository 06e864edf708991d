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

#include "curtail/accounting.hpp"

#include <algorithm>

namespace curtail {

void EnergyLedger::record_interval(const SiteId& site, Seconds start, Seconds end, double power_kw,
                                   const CarbonTrace& trace, const CurtailmentConfig& cfg) {
  if (end <= start) throw Error("record_interval: empty or inverted interval for site '" + site + "'");
  if (power_kw < 0) throw Error("record_interval: negative power");
  auto& spans = spans_[site];
  // Spans are kept sorted by start.
  auto it = std::lower_bound(spans.begin(), spans.end(), std::make_pair(start, end));
  if ((it != spans.end() && it->first < end) || (it != spans.begin() && std::prev(it)->second > start)) {
    throw Error("record_interval: overlaps an existing interval of site '" + site + "'");
  }
  spans.insert(it, {start, end});

  std::vector<Seconds> cuts{start};
  for (Seconds b : trace.breakpoints(start, end)) cuts.push_back(b);
  cuts.push_back(end);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Seconds a = cuts[i], b = cuts[i + 1];
    const double moer = trace.moer_at(a);
    const double kwh = power_kw * static_cast<double>(b - a) / 3600.0;
    intervals_.push_back({site, a, b, kwh, moer < cfg.threshold, kwh * moer});
  }
}

RunReport finalize(const std::vector<EnergyInterval>& intervals, const RunCounters& counters) {
  RunReport r;
  double curtailed_kwh = 0.0;
  for (const auto& iv : intervals) {
    r.total_energy_kwh += iv.energy_kwh;
    r.total_emissions_g += iv.emissions_g;
    if (iv.curtailed) curtailed_kwh += iv.energy_kwh;
  }
  r.curtailed_fraction = r.total_energy_kwh > 0 ? curtailed_kwh / r.total_energy_kwh : 0.0;
  r.wall_clock_s = counters.wall_clock_s;
  r.training_s = counters.training_s;
  r.overhead_s = counters.overhead_s;
  r.rounds = counters.rounds;
  r.steps_total = counters.steps_total;
  return r;
}

}  // namespace curtail
