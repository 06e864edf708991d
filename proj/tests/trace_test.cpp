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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "curtail/trace.hpp"

using namespace curtail;

namespace {

CarbonTrace two_step() { return parse_trace("0,120\n3600,80\n", "r"); }

// Per-second Riemann sum; exact for integer-second step functions.
double brute_emissions(const std::vector<TraceSample>& samples, double power_kw, Seconds a, Seconds b) {
  double g = 0.0;
  for (Seconds t = a; t < b; ++t) {
    double m = samples.front().moer;
    for (const auto& s : samples) {
      if (s.t <= t) m = s.moer;
    }
    g += power_kw * m / 3600.0;
  }
  return g;
}

CarbonTrace random_trace(std::mt19937_64& rng, int n) {
  std::vector<TraceSample> samples;
  Seconds t = 0;
  std::uniform_int_distribution<Seconds> gap(1, 900);
  std::uniform_real_distribution<double> moer(0.0, 400.0);
  for (int i = 0; i < n; ++i) {
    samples.push_back({t, std::round(moer(rng))});
    t += gap(rng);
  }
  return CarbonTrace("rand", samples);
}

}  // namespace

TEST_CASE("parse_trace reads integer rows") {
  const CarbonTrace tr = two_step();
  REQUIRE(tr.samples().size() == 2);
  CHECK(tr.samples()[0].t == 0);
  CHECK(tr.samples()[0].moer == 120);
  CHECK(tr.samples()[1].t == 3600);
  CHECK(tr.samples()[1].moer == 80);
  CHECK(tr.region() == "r");
}

TEST_CASE("parse_trace accepts header, comments, CRLF and ISO timestamps") {
  const std::string text =
      "timestamp,moer\r\n# comment\n2026-01-11T17:00:00Z,300\n2026-01-11T17:05:00Z , 42.5\n\n";
  const CarbonTrace tr = parse_trace(text, "CA", parse_iso8601_utc("2026-01-11T17:00:00Z"));
  REQUIRE(tr.samples().size() == 2);
  CHECK(tr.samples()[0].t == 0);
  CHECK(tr.samples()[1].t == 300);
  CHECK(tr.samples()[1].moer == 42.5);
}

TEST_CASE("parse_trace rejects bad input with a line number") {
  const auto line_of = [](const std::string& text) {
    try {
      parse_trace(text, "r");
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("0,120\n0,80\n") == 2);
  CHECK(line_of("0,120\n10,80\n5,80\n") == 3);
  CHECK(line_of("0,-1\n") == 1);
  CHECK(line_of("0,120\nnonsense\n") == 2);
  CHECK(line_of("0,abc\n") == 1);
  CHECK_THROWS_AS(parse_trace("", "r"), Error);
  CHECK_THROWS_WITH_AS(parse_trace("0,120\n0,80\n", "r"), doctest::Contains("duplicate"), ParseError);
}

TEST_CASE("25 hourly samples of a constant") {
  std::ostringstream text;
  for (int h = 0; h < 25; ++h) text << h * 3600 << ",50\n";
  const CarbonTrace tr = parse_trace(text.str(), "r");
  CHECK(tr.samples().size() == 25);
  for (const auto& s : tr.samples()) CHECK(s.moer == 50);
}

TEST_CASE("parse_iso8601_utc") {
  CHECK(parse_iso8601_utc("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601_utc("2026-01-11T17:00:00Z") == 1768150800);
  CHECK(parse_iso8601_utc("2024-02-29T00:00") == 1709164800);
  CHECK(parse_iso8601_utc("2026-01-11 17:00:00+00:00") == 1768150800);
  CHECK_THROWS_AS(parse_iso8601_utc("2023-02-29T00:00:00Z"), ParseError);
  CHECK_THROWS_AS(parse_iso8601_utc("2026-01-11T17:00:00+02:00"), ParseError);
}

TEST_CASE("moer_at carries the last observation forward") {
  const CarbonTrace tr = two_step();
  CHECK(tr.moer_at(1800) == 120);
  CHECK(tr.moer_at(3600) == 80);
  CHECK(tr.moer_at(7200) == 80);
  CHECK(tr.moer_at(3599) == 120);
  CHECK_THROWS_AS(tr.moer_at(-1), std::out_of_range);
}

TEST_CASE("curtailed_at uses a strict threshold") {
  const CurtailmentConfig cfg;
  CHECK(CarbonTrace("r", {{0, 99}}).curtailed_at(cfg, 0));
  CHECK_FALSE(CarbonTrace("r", {{0, 100}}).curtailed_at(cfg, 0));
  CHECK(CarbonTrace("r", {{0, 0}}).curtailed_at(cfg, 5));
}

TEST_CASE("windows") {
  const CurtailmentConfig cfg;
  CHECK(CarbonTrace("r", {{0, 50}}).windows(cfg, 3600) == std::vector<Window>{{0, 3600, WindowKind::curtailed}});
  CHECK(CarbonTrace("r", {{0, 50}}).windows(cfg, 100) == std::vector<Window>{{0, 100, WindowKind::curtailed}});
  const CarbonTrace tr("r", {{0, 150}, {600, 50}, {1200, 150}});
  CHECK(tr.windows(cfg, 1800) == std::vector<Window>{{0, 600, WindowKind::not_curtailed},
                                                     {600, 1200, WindowKind::curtailed},
                                                     {1200, 1800, WindowKind::not_curtailed}});
  // Same-kind samples merge.
  const CarbonTrace merged("r", {{0, 10}, {100, 20}, {200, 300}});
  CHECK(merged.windows(cfg, 250).size() == 2);
}

TEST_CASE("windows tile the horizon and alternate (randomized)") {
  std::mt19937_64 rng(11);
  const CurtailmentConfig cfg;
  for (int iter = 0; iter < 200; ++iter) {
    const CarbonTrace tr = random_trace(rng, 1 + static_cast<int>(rng() % 20));
    const Seconds horizon = tr.samples().back().t + static_cast<Seconds>(rng() % 1000);
    const auto w = tr.windows(cfg, horizon);
    if (horizon == tr.first_time()) {
      CHECK(w.empty());
      continue;
    }
    REQUIRE_FALSE(w.empty());
    CHECK(w.front().start == tr.first_time());
    CHECK(w.back().end == horizon);
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(w[i].start < w[i].end);
      if (i > 0) {
        CHECK(w[i].start == w[i - 1].end);
        CHECK(w[i].kind != w[i - 1].kind);
      }
      const bool curt = w[i].kind == WindowKind::curtailed;
      CHECK(tr.curtailed_at(cfg, w[i].start) == curt);
      CHECK(tr.curtailed_at(cfg, w[i].end - 1) == curt);
    }
  }
}

TEST_CASE("integrate_emissions") {
  CHECK(CarbonTrace("r", {{0, 80}}).integrate_emissions(2.0, 0, 1800) == doctest::Approx(80.0).epsilon(1e-12));
  CHECK(CarbonTrace("r", {{0, 120}, {1800, 60}}).integrate_emissions(1.0, 0, 3600) ==
        doctest::Approx(90.0).epsilon(1e-12));
  CHECK(two_step().integrate_emissions(0.0, 0, 7200) == 0.0);
  CHECK(two_step().integrate_emissions(3.0, 100, 100) == 0.0);
  CHECK_THROWS_AS(two_step().integrate_emissions(1.0, 10, 5), Error);
}

TEST_CASE("integrate_emissions matches a per-second sum and is additive (randomized)") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 100; ++iter) {
    const CarbonTrace tr = random_trace(rng, 1 + static_cast<int>(rng() % 8));
    const Seconds end_max = tr.samples().back().t + 600;
    const Seconds a = static_cast<Seconds>(rng() % static_cast<std::uint64_t>(end_max));
    const Seconds c = a + 1 + static_cast<Seconds>(rng() % static_cast<std::uint64_t>(end_max - a));
    const Seconds b = a + static_cast<Seconds>(rng() % static_cast<std::uint64_t>(c - a + 1));
    const double power = 0.5 + static_cast<double>(rng() % 40) / 10.0;
    const double whole = tr.integrate_emissions(power, a, c);
    const double oracle = brute_emissions(tr.samples(), power, a, c);
    CHECK(whole == doctest::Approx(oracle).epsilon(1e-9));
    const double split = tr.integrate_emissions(power, a, b) + tr.integrate_emissions(power, b, c);
    CHECK(split == doctest::Approx(whole).epsilon(1e-9));
  }
}

TEST_CASE("constant trace integrates exactly") {
  const CarbonTrace tr("r", {{0, 73}});
  for (Seconds d : {1, 7, 3600, 12345}) {
    CHECK(tr.integrate_emissions(2.5, 10, 10 + d) == 2.5 * static_cast<double>(d) / 3600.0 * 73.0);
  }
}

TEST_CASE("moer_at is right-continuous at every sample") {
  std::mt19937_64 rng(3);
  const CarbonTrace tr = random_trace(rng, 30);
  for (const auto& s : tr.samples()) CHECK(tr.moer_at(s.t) == s.moer);
}

TEST_CASE("breakpoints are strictly inside the range") {
  const CarbonTrace tr("r", {{0, 1}, {10, 2}, {20, 3}, {30, 4}});
  CHECK(tr.breakpoints(10, 30) == std::vector<Seconds>{20});
  CHECK(tr.breakpoints(-5, 31) == std::vector<Seconds>{0, 10, 20, 30});
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(CarbonTrace("r", {}), Error);
  CHECK_THROWS_AS(CarbonTrace("r", {{0, 1}, {0, 2}}), Error);
  CHECK_THROWS_AS(CarbonTrace("r", {{0, NAN}}), Error);
  CHECK_THROWS_AS(CarbonTrace("r", {{0, -3}}), Error);
}
