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

#include "curtail/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "curtail/artifacts.hpp"
#include "curtail/sim.hpp"

namespace curtail::cli {

namespace {

namespace fs = std::filesystem;

struct Loaded {
  Scenario scenario;
  TraceSet traces;
};

// Throws Error subclasses; callers map them to exit code 2.
Loaded load(const fs::path& scenario_path, const fs::path& trace_dir, const Overrides& overrides) {
  Loaded l{load_scenario(scenario_path), {}};
  if (l.scenario.name.empty()) l.scenario.name = scenario_path.stem().string();
  if (overrides.seed) l.scenario.set_seed(*overrides.seed);
  if (overrides.horizon) l.scenario.horizon = *overrides.horizon;
  l.scenario.validate();
  if (!fs::is_directory(trace_dir)) throw ValidationError("traces", "not a directory: " + trace_dir.string());
  l.traces = load_traces(l.scenario, trace_dir);
  check_traces(l.scenario, l.traces);
  return l;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void print_summary(std::ostream& out, const std::string& name, const RunResult& r) {
  out << "scenario           " << name << '\n'
      << "completion         " << (r.reason == CompletionReason::work_done ? "work_done" : "horizon") << '\n'
      << "runtime_h          " << fixed(static_cast<double>(r.report.wall_clock_s) / 3600.0, 3) << '\n'
      << "steps              " << r.report.steps_total << '\n'
      << "rounds             " << r.report.rounds << '\n'
      << "energy_kwh         " << fixed(r.report.total_energy_kwh, 3) << '\n'
      << "curtailed_fraction " << format_real(r.report.curtailed_fraction) << '\n'
      << "emissions_g        " << fixed(r.report.total_emissions_g, 1) << '\n'
      << "final_objective    " << format_real(r.final_objective) << '\n';
}

}  // namespace

int cmd_validate(const fs::path& scenario, const fs::path& traces, std::ostream& out, std::ostream& err) {
  try {
    const Loaded l = load(scenario, traces, {});
    out << "ok: " << l.scenario.sites.size() << " sites, " << l.traces.size() << " regions\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

int cmd_run(const fs::path& scenario, const fs::path& traces, const fs::path& out_dir, const Overrides& overrides,
            std::ostream& out, std::ostream& err) {
  Loaded l;
  try {
    l = load(scenario, traces, overrides);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  try {
    const RunResult result = run(l.scenario, l.traces);
    write_artifacts(out_dir, l.scenario, result);
    print_summary(out, l.scenario.name, result);
    return kExitOk;
  } catch (const std::exception& e) {
    remove_artifacts(out_dir);
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_compare(const std::vector<fs::path>& scenarios, const fs::path& traces, const fs::path& out_dir,
                const Overrides& overrides, std::ostream& out, std::ostream& err) {
  if (scenarios.size() < 2) {
    err << "error: compare needs at least two scenarios\n";
    return kExitInvalid;
  }
  std::vector<Loaded> loaded;
  for (const auto& path : scenarios) {
    try {
      loaded.push_back(load(path, traces, overrides));
    } catch (const std::exception& e) {
      err << "error: " << path.string() << ": " << e.what() << '\n';
      return kExitInvalid;
    }
  }

  struct Row {
    std::string name;
    RunResult result;
  };
  std::vector<Row> rows;
  for (const auto& l : loaded) {
    const fs::path dir = out_dir / l.scenario.name;
    try {
      RunResult r = run(l.scenario, l.traces);
      write_artifacts(dir, l.scenario, r);
      rows.push_back({l.scenario.name, std::move(r)});
    } catch (const std::exception& e) {
      remove_artifacts(dir);
      err << "error: " << l.scenario.name << ": " << e.what() << '\n';
      return kExitRuntime;
    }
  }

  std::ostringstream csv;
  csv << "scenario,runtime_h,final_objective,energy_kwh,curtailed_fraction,emissions_g,rows_consumed,steps,rounds\n";
  for (const auto& [name, r] : rows) {
    csv << name << ',' << format_real(static_cast<double>(r.report.wall_clock_s) / 3600.0) << ','
        << format_real(r.final_objective) << ',' << format_real(r.report.total_energy_kwh) << ','
        << format_real(r.report.curtailed_fraction) << ',' << format_real(r.report.total_emissions_g) << ','
        << r.table.total_rows() - r.table.remaining_rows() << ',' << r.report.steps_total << ','
        << r.report.rounds << '\n';
  }

  std::size_t width = 8;
  for (const auto& row : rows) width = std::max(width, row.name.size());
  std::ostringstream text;
  const auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };
  text << pad("scenario", width) << "  runtime_h  objective     energy_kwh  curtailed  emissions_kg\n";
  for (const auto& [name, r] : rows) {
    char objective[32];
    std::snprintf(objective, sizeof objective, "%-12.4e", r.final_objective);
    text << pad(name, width) << "  " << pad(fixed(static_cast<double>(r.report.wall_clock_s) / 3600.0, 2), 9)
         << "  " << objective << "  " << pad(fixed(r.report.total_energy_kwh, 2), 10) << "  "
         << pad(fixed(100.0 * r.report.curtailed_fraction, 1) + "%", 9) << "  "
         << fixed(r.report.total_emissions_g / 1000.0, 3) << '\n';
  }

  try {
    fs::create_directories(out_dir);
    std::ofstream(out_dir / "compare.csv") << csv.str();
    std::ofstream(out_dir / "compare.txt") << text.str();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  out << text.str();
  return kExitOk;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace-driven simulator for curtailment-aware federated training"};
  app.require_subcommand(1);

  std::string scenario, traces, out_dir = "out";
  std::vector<std::string> scenarios;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> horizon;

  auto* validate = app.add_subcommand("validate", "Parse a scenario and its traces");
  validate->add_option("--scenario", scenario, "Scenario file")->required();
  validate->add_option("--traces", traces, "Directory of <region>.csv traces")->required();

  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write artifacts");
  run_cmd->add_option("--scenario", scenario, "Scenario file")->required();
  run_cmd->add_option("--traces", traces, "Directory of <region>.csv traces")->required();
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--seed", seed, "Override the synthetic-data seed");
  run_cmd->add_option("--horizon", horizon, "Override the horizon in seconds");

  auto* compare = app.add_subcommand("compare", "Run several scenarios and tabulate them");
  compare->add_option("--scenario", scenarios, "Scenario files (repeat)")->required();
  compare->add_option("--traces", traces, "Directory of <region>.csv traces")->required();
  compare->add_option("--out", out_dir, "Output directory");
  compare->add_option("--seed", seed, "Override the synthetic-data seed");
  compare->add_option("--horizon", horizon, "Override the horizon in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  const Overrides overrides{seed, horizon};
  if (validate->parsed()) return cmd_validate(scenario, traces, out, err);
  if (run_cmd->parsed()) return cmd_run(scenario, traces, out_dir, overrides, out, err);
  return cmd_compare({scenarios.begin(), scenarios.end()}, traces, out_dir, overrides, out, err);
}

}  // namespace curtail::cli
