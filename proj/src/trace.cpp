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

#include "curtail/trace.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>
#include <string>

namespace curtail {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return parse_number(s.substr(pos, len), out);
}

}  // namespace

std::int64_t parse_iso8601_utc(std::string_view text) {
  const auto fail = [&] { return ParseError(0, "invalid ISO-8601 timestamp '" + std::string(text) + "'"); };
  int y, mo, d, h, mi, sec = 0;
  if (!parse_fixed_int(text, 0, 4, y) || text.size() < 16 || text[4] != '-' ||
      !parse_fixed_int(text, 5, 2, mo) || text[7] != '-' || !parse_fixed_int(text, 8, 2, d) ||
      (text[10] != 'T' && text[10] != ' ') || !parse_fixed_int(text, 11, 2, h) || text[13] != ':' ||
      !parse_fixed_int(text, 14, 2, mi)) {
    throw fail();
  }
  std::string_view rest = text.substr(16);
  if (!rest.empty() && rest.front() == ':') {
    if (!parse_fixed_int(rest, 1, 2, sec)) throw fail();
    rest.remove_prefix(3);
  }
  if (!(rest.empty() || rest == "Z" || rest == "+00:00" || rest == "+0000")) throw fail();

  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) throw fail();
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + h * 3600 + mi * 60 + sec;
}

CarbonTrace::CarbonTrace(RegionId region, std::vector<TraceSample> samples)
    : region_(std::move(region)), samples_(std::move(samples)) {
  if (samples_.empty()) throw Error("trace '" + region_ + "' has no samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i].moer) || samples_[i].moer < 0) {
      throw Error("trace '" + region_ + "': moer must be finite and >= 0");
    }
    if (i > 0 && samples_[i].t <= samples_[i - 1].t) {
      throw Error("trace '" + region_ + "': timestamps must be strictly increasing");
    }
  }
}

std::size_t CarbonTrace::index_at(Seconds t) const {
  if (t < samples_.front().t) {
    throw std::out_of_range("trace '" + region_ + "': t=" + std::to_string(t) + " precedes first sample");
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](Seconds v, const TraceSample& s) { return v < s.t; });
  return static_cast<std::size_t>(it - samples_.begin()) - 1;
}

double CarbonTrace::moer_at(Seconds t) const { return samples_[index_at(t)].moer; }

bool CarbonTrace::curtailed_at(const CurtailmentConfig& cfg, Seconds t) const {
  return moer_at(t) < cfg.threshold;
}

std::vector<Window> CarbonTrace::windows(const CurtailmentConfig& cfg, Seconds horizon) const {
  if (horizon < first_time()) throw std::out_of_range("horizon precedes first sample");
  std::vector<Window> out;
  for (std::size_t i = 0; i < samples_.size() && samples_[i].t < horizon; ++i) {
    const Seconds end = i + 1 < samples_.size() ? std::min(samples_[i + 1].t, horizon) : horizon;
    const WindowKind kind = samples_[i].moer < cfg.threshold ? WindowKind::curtailed : WindowKind::not_curtailed;
    if (!out.empty() && out.back().kind == kind) {
      out.back().end = end;
    } else {
      out.push_back({samples_[i].t, end, kind});
    }
  }
  return out;
}

double CarbonTrace::integrate_emissions(double power_kw, Seconds start, Seconds end) const {
  if (end < start) throw Error("integrate_emissions: inverted interval");
  if (power_kw < 0) throw Error("integrate_emissions: negative power");
  if (end == start) return 0.0;
  double grams = 0.0;
  Seconds cursor = start;
  for (std::size_t i = index_at(start); cursor < end; ++i) {
    const Seconds seg_end = i + 1 < samples_.size() ? std::min(samples_[i + 1].t, end) : end;
    grams += power_kw * (static_cast<double>(seg_end - cursor) / 3600.0) * samples_[i].moer;
    cursor = seg_end;
  }
  return grams;
}

std::vector<Seconds> CarbonTrace::breakpoints(Seconds start, Seconds end) const {
  std::vector<Seconds> out;
  for (const auto& s : samples_) {
    if (s.t > start && s.t < end) out.push_back(s.t);
  }
  return out;
}

CarbonTrace parse_trace(std::istream& in, RegionId region, std::int64_t epoch_unix) {
  std::vector<TraceSample> samples;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_row = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw ParseError(line_no, "expected 'timestamp,moer'");
    const std::string_view ts = trim(line.substr(0, comma));
    const std::string_view mv = trim(line.substr(comma + 1));

    Seconds t;
    if (!parse_number(ts, t)) {
      if (ts.find('-') != std::string_view::npos && ts.size() >= 16) {
        try {
          t = parse_iso8601_utc(ts) - epoch_unix;
        } catch (const ParseError& e) {
          throw ParseError(line_no, e.what());
        }
      } else if (!seen_row) {
        seen_row = true;  // header
        continue;
      } else {
        throw ParseError(line_no, "invalid timestamp '" + std::string(ts) + "'");
      }
    }
    seen_row = true;

    double moer;
    if (!parse_number(mv, moer) || !std::isfinite(moer)) {
      throw ParseError(line_no, "invalid moer value '" + std::string(mv) + "'");
    }
    if (moer < 0) throw ParseError(line_no, "negative moer");
    if (!samples.empty()) {
      if (t == samples.back().t) throw ParseError(line_no, "duplicate timestamp " + std::to_string(t));
      if (t < samples.back().t) throw ParseError(line_no, "timestamps not increasing");
    }
    samples.push_back({t, moer});
  }
  if (samples.empty()) throw ParseError(line_no, "trace '" + region + "' has no samples");
  return CarbonTrace(std::move(region), std::move(samples));
}

CarbonTrace parse_trace(std::string_view text, RegionId region, std::int64_t epoch_unix) {
  std::istringstream in{std::string(text)};
  return parse_trace(in, std::move(region), epoch_unix);
}

}  // namespace curtail
