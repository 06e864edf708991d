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

#include "curtail/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace curtail {

namespace {

struct Entry {
  std::string value;
  std::size_t line;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  Reader(std::map<std::string, Section>& sections, std::string name)
      : sec_(sections[name]), name_(std::move(name)) {}

  const Entry* find(const std::string& key) {
    auto it = sec_.find(key);
    if (it == sec_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  std::string field(const std::string& key) const { return name_ + "." + key; }

  template <typename T>
  void integer(const std::string& key, T& out) {
    if (const Entry* e = find(key)) {
      const char* end = e->value.data() + e->value.size();
      auto [ptr, ec] = std::from_chars(e->value.data(), end, out);
      if (ec != std::errc() || ptr != end) throw ParseError(e->line, field(key) + ": expected an integer");
    }
  }

  void real(const std::string& key, double& out) {
    if (const Entry* e = find(key)) {
      const char* end = e->value.data() + e->value.size();
      auto [ptr, ec] = std::from_chars(e->value.data(), end, out);
      if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ParseError(e->line, field(key) + ": expected a number");
      }
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const Entry* e = find(key)) out = e->value;
  }

 private:
  Section& sec_;
  std::string name_;
};

void read_trainer_overrides(Reader& r, TrainerSpec& t) {
  r.real("steps_per_second", t.steps_per_second);
  r.integer("micro_batch_rows", t.micro_batch_rows);
  r.integer("grad_accum", t.grad_accum);
  r.integer("local_ranks", t.local_ranks);
  r.real("learning_rate", t.learning_rate);
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const SiteSpec& Scenario::site(const SiteId& id) const {
  for (const auto& s : sites) {
    if (s.site_id == id) return s;
  }
  throw Error("unknown site '" + id + "'");
}

std::set<RegionId> Scenario::regions() const {
  std::set<RegionId> out;
  for (const auto& s : sites) out.insert(s.region);
  return out;
}

void Scenario::set_seed(std::uint64_t new_seed) {
  seed = new_seed;
  for (auto& s : sites) s.trainer.data_seed = new_seed;
}

void Scenario::validate() const {
  if (horizon <= 0) throw ValidationError("run.horizon", "must be > 0");
  if (sites.empty()) throw ValidationError("sites", "at least one [sites.<id>] section is required");
  if (hysteresis.tau_up < 0) throw ValidationError("hysteresis.tau_up", "must be >= 0");
  if (hysteresis.tau_down < 0) throw ValidationError("hysteresis.tau_down", "must be >= 0");
  if (hysteresis.provision_delay < 0) throw ValidationError("hysteresis.provision_delay", "must be >= 0");
  rounds.validate();
  if (shard_count < 1) throw ValidationError("shards.count", "must be >= 1");
  if (shard_count > kEvalShard) throw ValidationError("shards.count", "too many shards");
  if (shard_size < 1) throw ValidationError("shards.size", "must be >= 1");
  if (!(curtailment.threshold > 0)) throw ValidationError("curtailment.threshold", "must be > 0");
  for (const auto& s : sites) {
    const std::string prefix = "sites." + s.site_id + ".";
    if (s.region.empty()) throw ValidationError(prefix + "region", "is required");
    if (!(s.power.power_kw > 0) || !std::isfinite(s.power.power_kw)) {
      throw ValidationError(prefix + "power_kw", "must be > 0");
    }
    if (!(s.power.overhead_power_fraction >= 0 && s.power.overhead_power_fraction <= 1)) {
      throw ValidationError(prefix + "overhead_power_fraction", "must lie in [0, 1]");
    }
    if (s.weight < 1) throw ValidationError(prefix + "weight", "must be >= 1");
    try {
      s.trainer.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(prefix + e.field(), "must be valid");
    }
    if (s.trainer.dim != sites.front().trainer.dim) throw ValidationError(prefix + "dim", "must match all sites");
  }
  for (const auto& [id, rounds_failed] : failures) {
    if (std::none_of(sites.begin(), sites.end(), [&](const SiteSpec& s) { return s.site_id == id; })) {
      throw ValidationError("failures." + id, "names an unknown site");
    }
  }
}

Scenario parse_scenario(std::istream& in) {
  std::map<std::string, Section> sections;
  std::string current;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) throw ParseError(line_no, "empty section name");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    if (current.empty()) throw ParseError(line_no, "key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    auto [it, inserted] = sections[current].emplace(key, Entry{value, line_no});
    if (!inserted) throw ParseError(line_no, current + "." + key + ": duplicate key");
  }

  Scenario sc;
  {
    Reader r(sections, "run");
    r.text("name", sc.name);
    if (const Entry* e = r.find("epoch")) {
      std::int64_t v;
      const char* end = e->value.data() + e->value.size();
      auto [ptr, ec] = std::from_chars(e->value.data(), end, v);
      if (ec == std::errc() && ptr == end) {
        sc.epoch_unix = v;
      } else {
        try {
          sc.epoch_unix = parse_iso8601_utc(e->value);
        } catch (const ParseError&) {
          throw ParseError(e->line, "run.epoch: expected Unix seconds or ISO-8601 UTC");
        }
      }
    }
    r.integer("horizon", sc.horizon);
    r.integer("seed", sc.seed);
    std::string policy = "curtailment";
    r.text("policy", policy);
    if (policy == "curtailment") {
      sc.policy = SignalPolicy::curtailment;
    } else if (policy == "always_on") {
      sc.policy = SignalPolicy::always_on;
    } else {
      throw ValidationError("run.policy", "must be 'curtailment' or 'always_on'");
    }
  }
  {
    Reader r(sections, "curtailment");
    r.real("threshold", sc.curtailment.threshold);
  }
  {
    Reader r(sections, "hysteresis");
    r.integer("tau_up", sc.hysteresis.tau_up);
    r.integer("tau_down", sc.hysteresis.tau_down);
    r.integer("provision_delay", sc.hysteresis.provision_delay);
  }
  {
    Reader r(sections, "rounds");
    r.integer("delta_round", sc.rounds.delta_round);
    r.integer("overhead_serialize", sc.rounds.overhead_serialize);
    r.integer("overhead_setup_teardown", sc.rounds.overhead_setup_teardown);
  }
  {
    Reader r(sections, "shards");
    r.integer("count", sc.shard_count);
    r.integer("size", sc.shard_size);
  }
  TrainerSpec base;
  SitePowerModel base_power;
  {
    Reader r(sections, "trainer");
    std::string kind = "numeric";
    r.text("kind", kind);
    if (kind == "numeric") {
      base.kind = TrainerKind::numeric;
    } else if (kind == "throughput") {
      base.kind = TrainerKind::throughput;
    } else {
      throw ValidationError("trainer.kind", "must be 'numeric' or 'throughput'");
    }
    read_trainer_overrides(r, base);
    r.integer("dim", base.dim);
    r.real("noise_scale", base.noise_scale);
    Reader p(sections, "power");
    p.real("power_kw", base_power.power_kw);
    p.real("overhead_fraction", base_power.overhead_power_fraction);
  }
  base.data_seed = sc.seed;

  for (auto& [name, section] : sections) {
    if (name.rfind("sites.", 0) != 0) continue;
    SiteSpec site;
    site.site_id = name.substr(6);
    if (site.site_id.empty()) throw ValidationError(name, "site id is empty");
    Reader r(sections, name);
    r.text("region", site.region);
    site.power = base_power;
    site.power.site_id = site.site_id;
    r.real("power_kw", site.power.power_kw);
    r.real("overhead_power_fraction", site.power.overhead_power_fraction);
    site.trainer = base;
    read_trainer_overrides(r, site.trainer);
    r.integer("weight", site.weight);
    sc.sites.push_back(std::move(site));
  }
  std::sort(sc.sites.begin(), sc.sites.end(),
            [](const SiteSpec& a, const SiteSpec& b) { return a.site_id < b.site_id; });

  if (auto it = sections.find("failures"); it != sections.end()) {
    for (auto& [site, entry] : it->second) {
      entry.used = true;
      std::set<std::uint64_t> rounds;
      std::stringstream ss(entry.value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::uint64_t v;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
          throw ParseError(entry.line, "failures." + site + ": expected comma-separated commit indices");
        }
        rounds.insert(v);
      }
      sc.failures[site] = std::move(rounds);
    }
  }

  for (const auto& [name, section] : sections) {
    const bool known = name == "run" || name == "curtailment" || name == "hysteresis" || name == "rounds" ||
                       name == "shards" || name == "trainer" || name == "power" || name == "failures" ||
                       name.rfind("sites.", 0) == 0;
    if (!known) throw ParseError(0, "unknown section [" + name + "]");
    for (const auto& [key, entry] : section) {
      if (!entry.used) throw ParseError(entry.line, name + "." + key + ": unknown key");
    }
  }
  sc.validate();
  return sc;
}

Scenario parse_scenario(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file " + path.string());
  return parse_scenario(in);
}

std::string echo_scenario(const Scenario& sc) {
  std::ostringstream o;
  const TrainerSpec& t0 = sc.sites.empty() ? TrainerSpec{} : sc.sites.front().trainer;
  o << "[run]\n";
  if (!sc.name.empty()) o << "name = " << sc.name << "\n";
  o << "epoch = " << sc.epoch_unix << "\n"
    << "horizon = " << sc.horizon << "\n"
    << "seed = " << sc.seed << "\n"
    << "policy = " << (sc.policy == SignalPolicy::always_on ? "always_on" : "curtailment") << "\n\n"
    << "[curtailment]\nthreshold = " << fmt_real(sc.curtailment.threshold) << "\n\n"
    << "[hysteresis]\ntau_up = " << sc.hysteresis.tau_up << "\ntau_down = " << sc.hysteresis.tau_down
    << "\nprovision_delay = " << sc.hysteresis.provision_delay << "\n\n"
    << "[rounds]\ndelta_round = " << sc.rounds.delta_round
    << "\noverhead_serialize = " << sc.rounds.overhead_serialize
    << "\noverhead_setup_teardown = " << sc.rounds.overhead_setup_teardown << "\n\n"
    << "[shards]\ncount = " << sc.shard_count << "\nsize = " << sc.shard_size << "\n\n"
    << "[trainer]\nkind = " << (t0.kind == TrainerKind::numeric ? "numeric" : "throughput")
    << "\ndim = " << t0.dim << "\nnoise_scale = " << fmt_real(t0.noise_scale) << "\n";
  for (const auto& s : sc.sites) {
    o << "\n[sites." << s.site_id << "]\n"
      << "region = " << s.region << "\n"
      << "power_kw = " << fmt_real(s.power.power_kw) << "\n"
      << "overhead_power_fraction = " << fmt_real(s.power.overhead_power_fraction) << "\n"
      << "weight = " << s.weight << "\n"
      << "steps_per_second = " << fmt_real(s.trainer.steps_per_second) << "\n"
      << "micro_batch_rows = " << s.trainer.micro_batch_rows << "\n"
      << "grad_accum = " << s.trainer.grad_accum << "\n"
      << "local_ranks = " << s.trainer.local_ranks << "\n"
      << "learning_rate = " << fmt_real(s.trainer.learning_rate) << "\n";
  }
  if (!sc.failures.empty()) {
    o << "\n[failures]\n";
    for (const auto& [site, rounds] : sc.failures) {
      o << site << " =";
      bool first = true;
      for (auto r : rounds) {
        o << (first ? " " : ", ") << r;
        first = false;
      }
      o << "\n";
    }
  }
  return o.str();
}

TraceSet load_traces(const Scenario& scenario, const std::filesystem::path& dir) {
  TraceSet traces;
  for (const auto& region : scenario.regions()) {
    const auto path = dir / (region + ".csv");
    std::ifstream in(path);
    if (!in) throw ValidationError("traces." + region, "no trace file " + path.string());
    try {
      traces.emplace(region, parse_trace(in, region, scenario.epoch_unix));
    } catch (const ParseError& e) {
      throw ValidationError("traces." + region, std::string(path.filename()) + " " + e.what());
    }
  }
  return traces;
}

void check_traces(const Scenario& scenario, const TraceSet& traces) {
  for (const auto& region : scenario.regions()) {
    auto it = traces.find(region);
    if (it == traces.end()) throw ValidationError("traces." + region, "missing trace for region " + region);
    if (it->second.first_time() > 0) {
      throw ValidationError("traces." + region, "trace starts after the scenario epoch");
    }
  }
}

}  // namespace curtail
