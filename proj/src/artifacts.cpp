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

#include "curtail/artifacts.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

namespace curtail {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_energy_csv(std::ostream& out, const std::vector<EnergyInterval>& intervals) {
  out << "site_id,start,end,kwh,curtailed,emissions_g\n";
  for (const auto& iv : intervals) {
    out << iv.site_id << ',' << iv.start << ',' << iv.end << ',' << format_real(iv.energy_kwh) << ','
        << (iv.curtailed ? 1 : 0) << ',' << format_real(iv.emissions_g) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const RunResult& result) {
  const RunReport& r = result.report;
  out << "field,value\n"
      << "total_energy_kwh," << format_real(r.total_energy_kwh) << '\n'
      << "curtailed_fraction," << format_real(r.curtailed_fraction) << '\n'
      << "total_emissions_g," << format_real(r.total_emissions_g) << '\n'
      << "wall_clock_s," << r.wall_clock_s << '\n'
      << "training_s," << format_real(r.training_s) << '\n'
      << "overhead_s," << format_real(r.overhead_s) << '\n'
      << "rounds," << r.rounds << '\n'
      << "steps_total," << r.steps_total << '\n'
      << "completion," << (result.reason == CompletionReason::work_done ? "work_done" : "horizon") << '\n'
      << "rows_remaining," << result.table.remaining_rows() << '\n'
      << "final_objective," << format_real(result.final_objective) << '\n';
}

void write_model_bin(const std::filesystem::path& path, const ModelState& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (double v : model.params) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    out.write(bytes, 8);
  }
  if (!out) throw Error("short write to " + path.string());
}

std::vector<double> read_model_bin(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<double> params;
  unsigned char bytes[8];
  while (in.read(reinterpret_cast<char*>(bytes), 8)) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    params.push_back(std::bit_cast<double>(bits));
  }
  if (in.gcount() != 0) throw Error(path.string() + ": size is not a multiple of 8 bytes");
  return params;
}

void write_artifacts(const std::filesystem::path& dir, const Scenario& scenario, const RunResult& result) {
  std::filesystem::create_directories(dir);
  const auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open(kEventsFile);
    out << result.log.to_jsonl();
  }
  {
    auto out = open(kEnergyFile);
    write_energy_csv(out, result.energy);
  }
  {
    auto out = open(kSummaryFile);
    write_summary_csv(out, result);
  }
  write_model_bin(dir / kModelFile, result.model);
  {
    auto out = open(kScenarioEchoFile);
    out << echo_scenario(scenario);
  }
}

void remove_artifacts(const std::filesystem::path& dir) {
  std::error_code ec;
  for (const char* name : {kEventsFile, kEnergyFile, kSummaryFile, kModelFile, kScenarioEchoFile}) {
    std::filesystem::remove(dir / name, ec);
  }
}

}  // namespace curtail
