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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "curtail/sim.hpp"

namespace curtail {

namespace {

using json = nlohmann::ordered_json;

struct Span {
  Seconds start;
  Seconds end;
};

struct SiteReplay {
  std::optional<Seconds> last_provision;
  std::optional<Seconds> provisioned_since;
  std::optional<Seconds> ready_at;
  bool online = false;
  int offline_since_provision = 0;
  std::vector<Span> provisioned;
  std::vector<Span> provisioning;  // [ProvisionRequested, SiteReady)
};

class Checker {
 public:
  Checker(const EventLog& log, const std::vector<EnergyInterval>& energy, const Scenario& sc, const TraceSet& traces)
      : log_(log), energy_(energy), sc_(sc), traces_(traces) {}

  Verdict run() {
    check_events();
    if (!verdict_.ok) return verdict_;
    check_energy();
    return verdict_;
  }

 private:
  bool fail(std::string violation, std::string detail, std::uint64_t seq = 0) {
    if (verdict_.ok) verdict_ = Verdict{false, std::move(violation), std::move(detail), seq};
    return false;
  }

  bool signal(const RegionId& region, Seconds t) const {
    if (t < 0) return false;
    if (sc_.policy == SignalPolicy::always_on) return true;
    return traces_.at(region).curtailed_at(sc_.curtailment, t);
  }

  // Signal equals `value` at every instant of [a, b]. Before t = 0 the
  // signal was never observed and counts as not curtailed.
  bool constant_on(const RegionId& region, Seconds a, Seconds b, bool value) const {
    std::vector<Seconds> points{a};
    if (a < 0 && b >= 0) points.push_back(0);
    if (sc_.policy == SignalPolicy::curtailment) {
      for (Seconds t : traces_.at(region).breakpoints(std::max<Seconds>(a, 0), b + 1)) points.push_back(t);
    }
    return std::all_of(points.begin(), points.end(), [&](Seconds t) { return signal(region, t) == value; });
  }

  const SiteSpec* site(const json& payload, std::uint64_t seq) {
    if (!payload.contains("site")) {
      fail("schema", "event lacks a site field", seq);
      return nullptr;
    }
    const auto id = payload["site"].get<std::string>();
    for (const auto& s : sc_.sites) {
      if (s.site_id == id) return &s;
    }
    fail("schema", "unknown site '" + id + "'", seq);
    return nullptr;
  }

  bool merge_progress(const json& progress, const std::set<ShardIndex>* allowed, std::uint64_t seq) {
    for (const auto& pair : progress) {
      const auto j = pair[0].get<ShardIndex>();
      const auto rows = pair[1].get<RowCount>();
      if (j >= p_.size() || rows > sc_.shard_size) return fail("partition", "invalid progress entry", seq);
      if (allowed && !allowed->contains(j)) {
        return fail("partition", "progress reported for unassigned shard " + std::to_string(j), seq);
      }
    }
    for (const auto& pair : progress) {
      const auto j = pair[0].get<ShardIndex>();
      p_[j] = std::max(p_[j], pair[1].get<RowCount>());
    }
    return true;
  }

  void check_events() {
    const auto& events = log_.events();
    p_.assign(sc_.shard_count, 0);
    std::string mode = "idle";
    std::vector<std::string> mode_sites;
    Seconds mode_since = 0;
    Seconds last_t = 0;
    std::map<ShardIndex, SiteId> round_owner;
    bool complete = false;

    for (std::size_t k = 0; k < events.size() && verdict_.ok; ++k) {
      const LogEvent& e = events[k];
      if (complete) {
        fail("termination", "events after RunComplete", e.seq);
        break;
      }
      if (e.seq != k || e.t < last_t) {
        fail("order", "events out of (time, seq) order", e.seq);
        break;
      }
      last_t = e.t;
      switch (e.kind) {
        case EventKind::SignalChange: break;
        case EventKind::ProvisionRequested: {
          const SiteSpec* s = site(e.payload, e.seq);
          if (!s) break;
          SiteReplay& r = sites_[s->site_id];
          if (!constant_on(s->region, e.t - sc_.hysteresis.tau_up, e.t, true)) {
            fail("debounce-up", "site " + s->site_id + " provisioned without tau_up of curtailment", e.seq);
            break;
          }
          if (r.last_provision && r.offline_since_provision != 1) {
            fail("flapping", "site " + s->site_id + " re-provisioned without going offline once", e.seq);
            break;
          }
          r.last_provision = e.t;
          r.provisioned_since = e.t;
          r.offline_since_provision = 0;
          break;
        }
        case EventKind::SiteReady: {
          const SiteSpec* s = site(e.payload, e.seq);
          if (!s) break;
          SiteReplay& r = sites_[s->site_id];
          if (!r.last_provision || e.t != *r.last_provision + sc_.hysteresis.provision_delay) {
            fail("ready-delay", "SiteReady not exactly provision_delay after ProvisionRequested", e.seq);
            break;
          }
          r.provisioning.push_back({*r.last_provision, e.t});
          r.ready_at = e.t;
          r.online = true;
          break;
        }
        case EventKind::DeprovisionRequested: {
          const SiteSpec* s = site(e.payload, e.seq);
          if (!s) break;
          if (!constant_on(s->region, e.t - sc_.hysteresis.tau_down, e.t, false)) {
            fail("debounce-down", "site " + s->site_id + " deprovisioned without tau_down of non-curtailment",
                 e.seq);
          }
          break;
        }
        case EventKind::DrainComplete: break;
        case EventKind::SiteOffline: {
          const SiteSpec* s = site(e.payload, e.seq);
          if (!s) break;
          SiteReplay& r = sites_[s->site_id];
          if (!r.provisioned_since) {
            fail("lifecycle", "SiteOffline without provisioning", e.seq);
            break;
          }
          r.provisioned.push_back({*r.provisioned_since, e.t});
          r.provisioned_since.reset();
          r.online = false;
          ++r.offline_since_provision;
          break;
        }
        case EventKind::ModeChange: {
          const auto next = e.payload.at("mode").get<std::string>();
          const auto ids = e.payload.at("sites").get<std::vector<std::string>>();
          const bool sized = (next == "idle" && ids.empty()) || (next == "solo" && ids.size() == 1) ||
                             (next == "federated" && ids.size() >= 2);
          if (!sized) {
            fail("mode", "mode " + next + " with " + std::to_string(ids.size()) + " sites", e.seq);
            break;
          }
          if (mode == "idle") idle_spans_.push_back({mode_since, e.t});
          mode = next;
          mode_sites = ids;
          mode_since = e.t;
          break;
        }
        case EventKind::RoundStart: {
          if (mode != "federated") {
            fail("mode", "RoundStart outside federated mode", e.seq);
            break;
          }
          const auto& assignments = e.payload.at("assignments");
          if (assignments.size() < 2) {
            fail("mode", "round with fewer than two participants", e.seq);
            break;
          }
          round_owner.clear();
          for (const auto& [id, entries] : assignments.items()) {
            if (!sites_[id].online) {
              fail("causality", "round participant " + id + " is not online", e.seq);
              break;
            }
            for (const auto& entry : entries) {
              const auto j = entry[0].get<ShardIndex>();
              if (j >= p_.size() || entry[1].get<RowCount>() != p_[j]) {
                fail("partition", "assignment start row differs from committed progress", e.seq);
                break;
              }
              if (!round_owner.emplace(j, id).second) {
                fail("partition", "shard " + std::to_string(j) + " assigned twice", e.seq);
                break;
              }
            }
          }
          for (ShardIndex j = 0; j < p_.size() && verdict_.ok; ++j) {
            if (p_[j] < sc_.shard_size && !round_owner.contains(j)) {
              fail("partition", "incomplete shard " + std::to_string(j) + " left unassigned", e.seq);
            }
          }
          break;
        }
        case EventKind::RoundJoin: {
          const auto id = e.payload.at("site").get<std::string>();
          if (mode != "federated" || !sites_[id].online) {
            fail("causality", "join by " + id + " outside a federated round", e.seq);
            break;
          }
          for (const auto& entry : e.payload.at("assignment")) {
            const auto j = entry[0].get<ShardIndex>();
            auto it = round_owner.find(j);
            if (it == round_owner.end() || entry[1].get<RowCount>() != p_[j]) {
              fail("partition", "join takes a shard outside the round", e.seq);
              break;
            }
            it->second = id;
          }
          break;
        }
        case EventKind::RoundCommit: {
          std::map<SiteId, std::set<ShardIndex>> owned;
          for (const auto& [j, id] : round_owner) owned[id].insert(j);
          for (const auto& u : e.payload.at("updates")) {
            if (!u.at("reported").get<bool>()) continue;
            const auto id = u.at("site").get<std::string>();
            if (!merge_progress(u.at("progress"), &owned[id], e.seq)) break;
          }
          round_owner.clear();
          break;
        }
        case EventKind::SoloCommit: {
          const auto id = e.payload.at("site").get<std::string>();
          if (mode != "solo" || mode_sites.size() != 1 || mode_sites.front() != id) {
            fail("mode", "SoloCommit by " + id + " outside its solo span", e.seq);
            break;
          }
          if (e.payload.at("reported").get<bool>()) merge_progress(e.payload.at("progress"), nullptr, e.seq);
          break;
        }
        case EventKind::RunComplete: {
          complete = true;
          end_ = e.t;
          if (mode == "idle") idle_spans_.push_back({mode_since, e.t});
          for (auto& [id, r] : sites_) {
            if (r.provisioned_since) r.provisioned.push_back({*r.provisioned_since, e.t});
            if (r.last_provision && (!r.ready_at || *r.ready_at < *r.last_provision)) {
              r.provisioning.push_back({*r.last_provision, e.t});
            }
          }
          const RowCount remaining = [&] {
            RowCount sum = 0;
            for (RowCount v : p_) sum += sc_.shard_size - v;
            return sum;
          }();
          const bool done = e.payload.at("reason").get<std::string>() == "work_done";
          if (done != (remaining == 0)) fail("termination", "completion reason disagrees with progress", e.seq);
          break;
        }
      }
    }
    if (verdict_.ok && !complete) fail("termination", "log does not end with RunComplete");
  }

  static bool within(const std::vector<Span>& spans, Seconds a, Seconds b) {
    return std::any_of(spans.begin(), spans.end(), [&](const Span& s) { return s.start <= a && b <= s.end; });
  }

  void check_energy() {
    std::map<SiteId, std::vector<const EnergyInterval*>> by_site;
    for (const auto& iv : energy_) by_site[iv.site_id].push_back(&iv);
    for (auto& [id, list] : by_site) {
      std::sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->start < b->start; });
      for (std::size_t k = 1; k < list.size(); ++k) {
        if (list[k]->start < list[k - 1]->end) {
          fail("ledger-overlap", "overlapping energy intervals for site " + id);
          return;
        }
      }
      const SiteSpec* spec = nullptr;
      for (const auto& s : sc_.sites) {
        if (s.site_id == id) spec = &s;
      }
      if (!spec) {
        fail("ledger-site", "energy for unknown site " + id);
        return;
      }
      const SiteReplay& r = sites_[id];
      const CarbonTrace& trace = traces_.at(spec->region);
      double kwh = 0.0;
      for (const auto* iv : list) {
        if (!within(r.provisioned, iv->start, iv->end)) {
          fail("ledger-outside-provisioning", "energy drawn by " + id + " while not provisioned");
          return;
        }
        for (const auto& idle : idle_spans_) {
          const bool overlaps = iv->start < idle.end && idle.start < iv->end;
          if (overlaps && !within(r.provisioning, std::max(iv->start, idle.start), std::min(iv->end, idle.end))) {
            fail("idle-energy", "site " + id + " drew training power while idle");
            return;
          }
        }
        const double moer = trace.moer_at(iv->start);
        if (iv->curtailed != (moer < sc_.curtailment.threshold) ||
            std::abs(iv->emissions_g - iv->energy_kwh * moer) > 1e-9 * std::max(1.0, iv->emissions_g)) {
          fail("ledger-flag", "interval classification or emissions disagree with the trace");
          return;
        }
        kwh += iv->energy_kwh;
      }
      double seconds = 0.0;
      for (const auto& s : r.provisioned) seconds += static_cast<double>(s.end - s.start);
      const double full = spec->power.power_kw * seconds / 3600.0;
      const double floor = full * spec->power.overhead_power_fraction;
      const double tol = 1e-9 * std::max(1.0, full);
      if (kwh > full + tol || kwh < floor - tol ||
          (spec->power.overhead_power_fraction == 1.0 && std::abs(kwh - full) > tol)) {
        fail("energy-conservation", "site " + id + " ledger energy disagrees with provisioned time");
        return;
      }
    }
    for (const auto& [id, r] : sites_) {
      if (!by_site.contains(id) && !r.provisioned.empty()) {
        double seconds = 0.0;
        for (const auto& s : r.provisioned) seconds += static_cast<double>(s.end - s.start);
        if (seconds > 0 && sc_.site(id).power.overhead_power_fraction > 0) {
          fail("energy-conservation", "site " + id + " was provisioned but drew no energy");
          return;
        }
      }
    }
  }

  const EventLog& log_;
  const std::vector<EnergyInterval>& energy_;
  const Scenario& sc_;
  const TraceSet& traces_;
  Verdict verdict_;
  std::vector<RowCount> p_;
  std::map<SiteId, SiteReplay> sites_;
  std::vector<Span> idle_spans_;
  Seconds end_ = 0;
};

}  // namespace

Verdict replay_check(const EventLog& log, const std::vector<EnergyInterval>& energy, const Scenario& scenario,
                     const TraceSet& traces) {
  try {
    return Checker(log, energy, scenario, traces).run();
  } catch (const std::exception& e) {
    return Verdict{false, "schema", e.what(), 0};
  }
}

}  // namespace curtail
