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

#include <istream>
#include <string_view>
#include <vector>

#include "curtail/common.hpp"

namespace curtail {

struct TraceSample {
  Seconds t;
  double moer;  // gCO2/kWh
};

struct CurtailmentConfig {
  double threshold = 100.0;  // gCO2/kWh, strict: moer < threshold is curtailed
};

enum class WindowKind { curtailed, not_curtailed };

struct Window {
  Seconds start;
  Seconds end;
  WindowKind kind;

  bool operator==(const Window&) const = default;
};

/// Piecewise-constant marginal emissions signal of one region.
///
/// Lookups are right-continuous with the last observation carried forward,
/// including past the final sample.
class CarbonTrace {
 public:
  CarbonTrace(RegionId region, std::vector<TraceSample> samples);

  const RegionId& region() const { return region_; }
  const std::vector<TraceSample>& samples() const { return samples_; }
  Seconds first_time() const { return samples_.front().t; }

  double moer_at(Seconds t) const;
  bool curtailed_at(const CurtailmentConfig& cfg, Seconds t) const;

  /// Maximal same-kind intervals tiling [first_time(), horizon).
  std::vector<Window> windows(const CurtailmentConfig& cfg, Seconds horizon) const;

  /// Grams of CO2 for drawing `power_kw` over [start, end).
  double integrate_emissions(double power_kw, Seconds start, Seconds end) const;

  /// Sample times strictly inside (start, end).
  std::vector<Seconds> breakpoints(Seconds start, Seconds end) const;

 private:
  std::size_t index_at(Seconds t) const;

  RegionId region_;
  std::vector<TraceSample> samples_;
};

/// Parses the `timestamp,moer` CSV format. ISO-8601 UTC timestamps are
/// converted to seconds relative to `epoch_unix`.
CarbonTrace parse_trace(std::istream& in, RegionId region, std::int64_t epoch_unix = 0);
CarbonTrace parse_trace(std::string_view text, RegionId region, std::int64_t epoch_unix = 0);

/// Parses `YYYY-MM-DDTHH:MM[:SS][Z|+00:00]` into Unix seconds. Throws ParseError.
std::int64_t parse_iso8601_utc(std::string_view text);

}  // namespace curtail
