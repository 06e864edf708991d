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

#include "curtail/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <tuple>

namespace curtail {

namespace {

using json = nlohmann::ordered_json;

enum class Action { signal, timer, solo_stop, round_end, drain_done, reconcile, horizon };

struct QueueItem {
  Seconds t;
  std::uint64_t seq;
  Action action;
  std::size_t index;
  std::uint64_t token;
  bool value;

  bool operator>(const QueueItem& o) const { return std::tie(t, seq) > std::tie(o.t, o.seq); }
};

// One site's training work inside a solo segment or a federated round.
struct Segment {
  ShardAssignment assignment;
  Seconds overhead_start = 0;
  Seconds train_start = 0;
  std::uint64_t max_steps = 0;
  bool budget_capped = false;  // max_steps limited by time, not by remaining rows
  std::optional<std::uint64_t> stopped_steps;
  Seconds stop_time = 0;

  std::uint64_t steps() const { return stopped_steps.value_or(max_steps); }
};

struct PowerState {
  double factor = 0.0;
  Seconds since = 0;
  std::vector<std::pair<Seconds, double>> planned;
};

struct SiteRun {
  const SiteSpec* spec;
  const CarbonTrace* trace;
  SiteLifecycle lc;
  std::uint64_t timer_token = 0;
  bool online = false;
  std::optional<Seconds> provision_requested_at;
  std::optional<Seconds> drain_at;
  PowerState power;
  std::optional<Segment> seg;
};

json assignment_json(const ShardAssignment& a) {
  json arr = json::array();
  for (const auto& e : a.entries) arr.push_back(json::array({e.shard, e.start_row}));
  return arr;
}

json progress_json(const ProgressReport& p) {
  json arr = json::array();
  for (const auto& [j, rows] : p) arr.push_back(json::array({j, rows}));
  return arr;
}

class Simulation {
 public:
  Simulation(const Scenario& sc, const TraceSet& traces, const RunOptions& options)
      : sc_(sc), options_(options), global_{ModelState::zeros(sc.sites.front().trainer.dim),
                                            ShardTable::uniform(sc.shard_count, sc.shard_size)} {
    for (const auto& spec : sc.sites) {
      sites_.push_back(SiteRun{&spec, &traces.at(spec.region), SiteLifecycle(spec.site_id), 0, false,
                               std::nullopt, std::nullopt, {}, std::nullopt});
    }
    for (const auto& region : sc.regions()) regions_.push_back(&traces.at(region));
  }

  RunResult run() {
    schedule_signals();
    push(sc_.horizon, Action::horizon, 0, 0, false);
    while (!queue_.empty() && !finished_) {
      const QueueItem item = queue_.top();
      queue_.pop();
      now_ = item.t;
      dispatch(item);
    }
    RunResult out;
    out.log = std::move(log_);
    out.energy = ledger_.intervals();
    out.report = finalize(ledger_, counters_);
    out.model = global_.theta;
    out.table = global_.table;
    out.rounds = std::move(rounds_);
    out.reason = reason_;
    out.final_objective = evaluation_objective(global_.theta.params, sc_.sites.front().trainer);
    return out;
  }

 private:
  // ---- queue ------------------------------------------------------------

  void push(Seconds t, Action a, std::size_t index, std::uint64_t token, bool value) {
    queue_.push({t, next_seq_++, a, index, token, value});
  }

  void schedule_signals() {
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      const bool initial = sc_.policy == SignalPolicy::always_on || regions_[r]->curtailed_at(sc_.curtailment, 0);
      push(0, Action::signal, r, 0, initial);
    }
    if (sc_.policy == SignalPolicy::always_on) return;
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      for (const auto& w : regions_[r]->windows(sc_.curtailment, sc_.horizon)) {
        if (w.start > 0) push(w.start, Action::signal, r, 0, w.kind == WindowKind::curtailed);
      }
    }
  }

  void dispatch(const QueueItem& item) {
    switch (item.action) {
      case Action::signal: on_signal(item.index, item.value); break;
      case Action::timer:
        if (item.token == sites_[item.index].timer_token) on_timer(item.index);
        break;
      case Action::solo_stop:
        if (item.token == solo_token_ && mode_ == ModeKind::solo) commit_solo();
        break;
      case Action::round_end:
        if (item.token == round_token_ && mode_ == ModeKind::federated) commit_round();
        break;
      case Action::drain_done: on_drain_done(item.index); break;
      case Action::reconcile:
        reconcile_pending_ = false;
        if (mode_ == ModeKind::idle) reconcile();
        break;
      case Action::horizon: on_horizon(); break;
    }
  }

  // ---- signals and lifecycle -------------------------------------------

  void on_signal(std::size_t region_index, bool curtailed) {
    const CarbonTrace& trace = *regions_[region_index];
    log_.append(now_, EventKind::SignalChange,
                json{{"region", trace.region()}, {"curtailed", curtailed}, {"moer", trace.moer_at(now_)}});
    for (std::size_t i = 0; i < sites_.size(); ++i) {
      if (sites_[i].trace != &trace) continue;
      handle_lifecycle(i, sites_[i].lc.observe_signal(sc_.hysteresis, now_, curtailed));
      reschedule_timer(i);
    }
  }

  void on_timer(std::size_t i) {
    SiteRun& s = sites_[i];
    handle_lifecycle(i, s.lc.observe_signal(sc_.hysteresis, now_, s.lc.last_signal()));
    reschedule_timer(i);
  }

  void reschedule_timer(std::size_t i) {
    SiteRun& s = sites_[i];
    ++s.timer_token;
    if (auto d = s.lc.next_deadline(sc_.hysteresis)) push(*d, Action::timer, i, s.timer_token, false);
  }

  void handle_lifecycle(std::size_t i, const std::vector<LifecycleEvent>& events) {
    SiteRun& s = sites_[i];
    for (const auto& ev : events) {
      switch (ev.kind) {
        case LifecycleEventKind::ProvisionRequested:
          log_.append(ev.time, EventKind::ProvisionRequested, json{{"site", s.spec->site_id}});
          s.provision_requested_at = ev.time;
          power_to(i, ev.time, s.spec->power.overhead_power_fraction);
          break;
        case LifecycleEventKind::SiteReady:
          log_.append(ev.time, EventKind::SiteReady, json{{"site", s.spec->site_id}});
          counters_.overhead_s += static_cast<double>(ev.time - *s.provision_requested_at);
          s.provision_requested_at.reset();
          s.online = true;
          power_to(i, ev.time, 1.0);
          on_site_ready(i);
          break;
        case LifecycleEventKind::DeprovisionRequested:
          log_.append(ev.time, EventKind::DeprovisionRequested, json{{"site", s.spec->site_id}});
          on_deprovision(i);
          break;
        case LifecycleEventKind::DrainComplete:
        case LifecycleEventKind::SiteOffline:
          break;
      }
    }
  }

  bool eligible(std::size_t i) const { return sites_[i].online && sites_[i].lc.is_up(); }

  // ---- power ------------------------------------------------------------

  void apply_power(std::size_t i, Seconds t, double factor) {
    PowerState& p = sites_[i].power;
    if (factor == p.factor) return;
    if (p.factor > 0 && t > p.since) {
      const SiteSpec& spec = *sites_[i].spec;
      ledger_.record_interval(spec.site_id, p.since, t, spec.power.power_kw * p.factor, *sites_[i].trace,
                              sc_.curtailment);
    }
    p.factor = factor;
    p.since = t;
  }

  // Applies due planned changes, drops later ones, then sets `factor` from t.
  void power_to(std::size_t i, Seconds t, double factor) {
    PowerState& p = sites_[i].power;
    auto planned = std::move(p.planned);
    p.planned.clear();
    for (const auto& [at, f] : planned) {
      if (at <= t) apply_power(i, at, f);
    }
    apply_power(i, t, factor);
  }

  void plan_power(std::size_t i, Seconds t, double factor) { sites_[i].power.planned.emplace_back(t, factor); }

  // ---- segment timing ---------------------------------------------------

  double rate(std::size_t i) const { return sites_[i].spec->trainer.steps_per_second; }

  // Steps begun by time t: the in-flight one is allowed to finish.
  std::uint64_t steps_started(std::size_t i, const Segment& seg, Seconds t) const {
    if (t <= seg.train_start) return 0;
    const double raw = static_cast<double>(t - seg.train_start) * rate(i);
    return std::min(seg.max_steps, static_cast<std::uint64_t>(std::ceil(raw - 1e-9)));
  }

  std::uint64_t steps_completed(std::size_t i, const Segment& seg, Seconds t) const {
    if (t <= seg.train_start) return 0;
    const double raw = static_cast<double>(t - seg.train_start) * rate(i);
    return std::min(seg.max_steps, static_cast<std::uint64_t>(std::floor(raw + 1e-9)));
  }

  Seconds finish_time(std::size_t i, const Segment& seg, std::uint64_t steps) const {
    return seg.train_start + static_cast<Seconds>(std::ceil(static_cast<double>(steps) / rate(i) - 1e-9));
  }

  // Stops a running segment at t, letting the in-flight step complete.
  Seconds stop_segment(std::size_t i, Seconds t) {
    Segment& seg = *sites_[i].seg;
    if (seg.stopped_steps) return seg.stop_time;
    const std::uint64_t steps = steps_started(i, seg, t);
    seg.stopped_steps = steps;
    seg.stop_time = steps == 0 ? t : std::max(t, finish_time(i, seg, steps));
    seg.budget_capped = false;
    return seg.stop_time;
  }

  Segment make_segment(std::size_t i, ShardAssignment assignment, Seconds overhead_start, Seconds train_start,
                       std::optional<double> budget) const {
    const TrainerSpec& spec = sites_[i].spec->trainer;
    Segment seg;
    seg.overhead_start = overhead_start;
    seg.train_start = train_start;
    const std::uint64_t exhaust = steps_to_exhaust(spec, assignment_rows(assignment, global_.table));
    if (budget) {
      const std::uint64_t by_time = steps_for_budget(spec, *budget);
      seg.max_steps = std::min(by_time, exhaust);
      seg.budget_capped = by_time < exhaust;
    } else {
      seg.max_steps = exhaust;
    }
    seg.assignment = std::move(assignment);
    return seg;
  }

  // Time spent in the training window, as charged to training_s.
  double train_seconds(std::size_t i, const Segment& seg, Seconds window_end) const {
    const double busy = static_cast<double>(seg.steps()) / rate(i);
    if (seg.budget_capped) return std::max(busy, static_cast<double>(window_end - seg.train_start));
    return busy;
  }

  void charge_overhead(const Segment& seg, Seconds close) {
    const Seconds end = std::min(seg.train_start, close);
    if (end > seg.overhead_start) counters_.overhead_s += static_cast<double>(end - seg.overhead_start);
  }

  // ---- mode management --------------------------------------------------

  void set_mode(ModeKind kind, std::vector<SiteId> sites) {
    ExecutionMode next{kind, std::move(sites)};
    if (next == logged_mode_ && mode_logged_) return;
    mode_logged_ = true;
    logged_mode_ = next;
    json ids = json::array();
    for (const auto& s : next.sites) ids.push_back(s);
    log_.append(now_, EventKind::ModeChange, json{{"mode", std::string(to_string(kind))}, {"sites", ids}});
  }

  // Chooses the next mode from the eligible sites. Only called between segments.
  void reconcile() {
    std::vector<std::size_t> up;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
      if (eligible(i)) up.push_back(i);
    }
    std::vector<SiteId> ids;
    for (auto i : up) ids.push_back(sites_[i].spec->site_id);
    if (up.empty()) {
      mode_ = ModeKind::idle;
      set_mode(ModeKind::idle, {});
    } else if (up.size() == 1) {
      set_mode(ModeKind::solo, ids);
      start_solo(up.front());
    } else {
      set_mode(ModeKind::federated, ids);
      start_round(up);
    }
  }

  void on_site_ready(std::size_t i) {
    switch (mode_) {
      case ModeKind::idle:
        // Sites becoming ready at the same instant are seen together.
        if (!reconcile_pending_) {
          reconcile_pending_ = true;
          push(now_, Action::reconcile, 0, 0, false);
        }
        break;
      case ModeKind::solo: {
        // Hand off: the solo site finishes its in-flight step, commits, then rounds begin.
        const Seconds stop = stop_segment(solo_site_, now_);
        push(stop, Action::solo_stop, 0, ++solo_token_, false);
        break;
      }
      case ModeKind::federated: try_join(i); break;
    }
  }

  void on_deprovision(std::size_t i) {
    SiteRun& s = sites_[i];
    Seconds done = now_;
    if (mode_ == ModeKind::solo && i == solo_site_) {
      done = stop_segment(i, now_);
      push(done, Action::solo_stop, 0, ++solo_token_, false);
    } else if (mode_ == ModeKind::federated && s.seg) {
      done = stop_segment(i, now_);
      reschedule_round_end();
    }
    s.drain_at = done;
    push(done, Action::drain_done, i, 0, false);
  }

  void on_drain_done(std::size_t i) {
    SiteRun& s = sites_[i];
    if (!s.lc.is_draining()) return;
    s.drain_at.reset();
    for (const auto& ev : s.lc.complete_drain(now_)) {
      const EventKind kind =
          ev.kind == LifecycleEventKind::DrainComplete ? EventKind::DrainComplete : EventKind::SiteOffline;
      log_.append(ev.time, kind, json{{"site", s.spec->site_id}});
    }
    s.online = false;
    power_to(i, now_, 0.0);
    reschedule_timer(i);
  }

  // ---- solo -------------------------------------------------------------

  void start_solo(std::size_t i) {
    mode_ = ModeKind::solo;
    solo_site_ = i;
    const SiteId ids[] = {sites_[i].spec->site_id};
    auto assignments = assign_shards(global_.table, std::span<const SiteId>(ids));
    sites_[i].seg = make_segment(i, std::move(assignments.front()), now_, now_, std::nullopt);
    power_to(i, now_, 1.0);
    push(finish_time(i, *sites_[i].seg, sites_[i].seg->max_steps), Action::solo_stop, 0, ++solo_token_, false);
  }

  void commit_solo() {
    const std::size_t i = solo_site_;
    SiteRun& s = sites_[i];
    Segment seg = std::move(*s.seg);
    s.seg.reset();
    SiteUpdate u = train_steps(global_.theta, s.spec->trainer, seg.assignment, global_.table, seg.steps(),
                               options_.on_consume);
    const bool reported = !fails(s.spec->site_id);
    if (reported && u.batches > 0) {
      ModelState next = u.theta_s;
      next.version = global_.theta.version + 1;
      const ProgressReport reports[] = {u.progress};
      commit(global_, next, reports);
    }
    counters_.steps_total += u.batches;
    counters_.training_s += train_seconds(i, seg, now_);
    log_.append(now_, EventKind::SoloCommit,
                json{{"commit", commit_index_},
                     {"site", s.spec->site_id},
                     {"batches", u.batches},
                     {"rows", u.rows_consumed},
                     {"reported", reported},
                     {"progress", progress_json(u.progress)},
                     {"version", global_.theta.version},
                     {"objective", objective()}});
    ++commit_index_;
    mode_ = ModeKind::idle;
    after_commit();
  }

  // ---- federated rounds -------------------------------------------------

  void start_round(const std::vector<std::size_t>& participants) {
    mode_ = ModeKind::federated;
    round_start_ = now_;
    round_deadline_ = now_ + sc_.rounds.delta_round;
    round_theta_ = global_.theta;
    participants_ = participants;

    std::vector<SiteWeight> weights;
    for (auto i : participants) weights.push_back({sites_[i].spec->site_id, sites_[i].spec->weight});
    auto assignments = assign_shards(global_.table, std::span<const SiteWeight>(weights));

    const Seconds train_start = now_ + sc_.rounds.overhead();
    const double budget = static_cast<double>(sc_.rounds.training_budget());
    json sites = json::array();
    json assigned = json::object();
    for (std::size_t k = 0; k < participants.size(); ++k) {
      const std::size_t i = participants[k];
      const SiteId& id = sites_[i].spec->site_id;
      sites_[i].seg = make_segment(i, std::move(assignments[k]), now_, train_start, budget);
      power_to(i, now_, sites_[i].spec->power.overhead_power_fraction);
      plan_power(i, train_start, 1.0);
      sites.push_back(id);
      assigned[id] = assignment_json(sites_[i].seg->assignment);
    }
    log_.append(now_, EventKind::RoundStart,
                json{{"round", round_index_}, {"sites", sites}, {"assignments", assigned}});
    reschedule_round_end();
  }

  void reschedule_round_end() {
    Seconds end = now_;
    for (auto i : participants_) {
      const Segment& seg = *sites_[i].seg;
      Seconds done;
      if (seg.stopped_steps) {
        done = seg.stop_time;
      } else {
        done = finish_time(i, seg, seg.max_steps);
        if (seg.budget_capped) done = std::max(done, round_deadline_);
      }
      end = std::max(end, done);
    }
    push(end, Action::round_end, 0, ++round_token_, false);
  }

  // Mid-round join: the newcomer takes the shards no current participant will reach.
  void try_join(std::size_t i) {
    const Seconds train_start = now_ + sc_.rounds.overhead_setup_teardown;
    if (train_start >= round_deadline_) return;

    std::vector<ShardAssignment::Entry> spare;
    for (auto p : participants_) {
      Segment& seg = *sites_[p].seg;
      const TrainerSpec& spec = sites_[p].spec->trainer;
      RowCount reach = seg.steps() * spec.rows_per_step();
      std::vector<ShardAssignment::Entry> kept;
      for (const auto& e : seg.assignment.entries) {
        if (reach > 0) {
          kept.push_back(e);
          const RowCount rows = global_.table.size(e.shard) - e.start_row;
          reach -= std::min(reach, rows);
        } else {
          spare.push_back(e);
        }
      }
      seg.assignment.entries = std::move(kept);
      if (!seg.stopped_steps && seg.budget_capped) {
        const std::uint64_t exhaust =
            steps_to_exhaust(spec, assignment_rows(seg.assignment, global_.table));
        seg.budget_capped = seg.max_steps < exhaust;
      }
    }
    if (spare.empty()) return;
    std::stable_sort(spare.begin(), spare.end(), [](const auto& a, const auto& b) {
      return a.start_row != b.start_row ? a.start_row > b.start_row : a.shard < b.shard;
    });

    SiteRun& s = sites_[i];
    ShardAssignment assignment{s.spec->site_id, std::move(spare)};
    s.seg = make_segment(i, std::move(assignment), now_, train_start,
                         static_cast<double>(round_deadline_ - train_start));
    participants_.push_back(i);
    std::sort(participants_.begin(), participants_.end());
    power_to(i, now_, s.spec->power.overhead_power_fraction);
    plan_power(i, train_start, 1.0);
    log_.append(now_, EventKind::RoundJoin,
                json{{"round", round_index_},
                     {"site", s.spec->site_id},
                     {"assignment", assignment_json(s.seg->assignment)}});
    reschedule_round_end();
  }

  void commit_round() {
    RoundRecord rec;
    rec.round_index = round_index_;
    rec.start = round_start_;
    rec.end = now_;
    std::vector<SiteUpdate> reported;
    std::vector<ProgressReport> reports;
    json updates = json::array();
    for (auto i : participants_) {
      SiteRun& s = sites_[i];
      Segment seg = std::move(*s.seg);
      s.seg.reset();
      SiteUpdate u = train_steps(round_theta_, s.spec->trainer, seg.assignment, global_.table, seg.steps(),
                                 options_.on_consume);
      u.train_seconds = train_seconds(i, seg, round_deadline_);
      charge_overhead(seg, seg.stopped_steps ? seg.stop_time : now_);
      counters_.training_s += u.train_seconds;
      counters_.steps_total += u.batches;
      const bool ok = !fails(s.spec->site_id);
      updates.push_back(json{{"site", s.spec->site_id},
                             {"batches", u.batches},
                             {"rows", u.rows_consumed},
                             {"train_seconds", u.train_seconds},
                             {"reported", ok},
                             {"progress", progress_json(u.progress)}});
      rec.participants.push_back(s.spec->site_id);
      rec.assignments.push_back(seg.assignment);
      if (s.online) power_to(i, now_, 1.0);
      if (ok) {
        reports.push_back(u.progress);
        reported.push_back(std::move(u));
      }
    }
    rec.aggregated = reported.empty() ? global_.theta : aggregate(reported, global_.theta);
    commit(global_, rec.aggregated, reports);
    rec.updates = std::move(reported);
    log_.append(now_, EventKind::RoundCommit,
                json{{"round", round_index_},
                     {"commit", commit_index_},
                     {"updates", updates},
                     {"version", global_.theta.version},
                     {"objective", objective()}});
    rounds_.push_back(std::move(rec));
    ++commit_index_;
    ++round_index_;
    ++counters_.rounds;
    participants_.clear();
    mode_ = ModeKind::idle;
    after_commit();
  }

  // ---- completion -------------------------------------------------------

  void after_commit() {
    if (global_.table.remaining_rows() == 0) {
      finish(CompletionReason::work_done);
    } else if (!finishing_) {
      // Drains that end with this commit complete before the next mode is chosen.
      for (std::size_t i = 0; i < sites_.size(); ++i) {
        if (sites_[i].drain_at && *sites_[i].drain_at <= now_) on_drain_done(i);
      }
      reconcile();
    }
  }

  void on_horizon() {
    // Work done by the horizon is committed; the in-flight step is cut.
    if (mode_ == ModeKind::solo) {
      Segment& seg = *sites_[solo_site_].seg;
      if (!seg.stopped_steps) {
        seg.stopped_steps = steps_completed(solo_site_, seg, now_);
        seg.stop_time = now_;
        seg.budget_capped = false;
      }
      finishing_ = true;
      commit_solo();
    } else if (mode_ == ModeKind::federated) {
      for (auto i : participants_) {
        Segment& seg = *sites_[i].seg;
        if (!seg.stopped_steps) {
          seg.stopped_steps = steps_completed(i, seg, now_);
          seg.stop_time = now_;
          seg.budget_capped = false;
        }
      }
      finishing_ = true;
      commit_round();
    }
    if (!finished_) finish(CompletionReason::horizon);
  }

  void finish(CompletionReason reason) {
    for (std::size_t i = 0; i < sites_.size(); ++i) {
      SiteRun& s = sites_[i];
      if (s.provision_requested_at) {
        counters_.overhead_s += static_cast<double>(now_ - *s.provision_requested_at);
        s.provision_requested_at.reset();
      }
      power_to(i, now_, 0.0);
    }
    reason_ = reason;
    counters_.wall_clock_s = now_;
    log_.append(now_, EventKind::RunComplete,
                json{{"reason", reason == CompletionReason::work_done ? "work_done" : "horizon"},
                     {"rows_remaining", global_.table.remaining_rows()}});
    finished_ = true;
  }

  bool fails(const SiteId& id) const {
    auto it = sc_.failures.find(id);
    return it != sc_.failures.end() && it->second.contains(commit_index_);
  }

  double objective() const { return evaluation_objective(global_.theta.params, sc_.sites.front().trainer); }

  const Scenario& sc_;
  const RunOptions& options_;
  std::vector<SiteRun> sites_;
  std::vector<const CarbonTrace*> regions_;
  GlobalState global_;
  EnergyLedger ledger_;
  EventLog log_;
  RunCounters counters_;
  std::vector<RoundRecord> rounds_;

  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue_;
  std::uint64_t next_seq_ = 0;
  Seconds now_ = 0;
  bool finished_ = false;
  bool finishing_ = false;
  bool reconcile_pending_ = false;
  CompletionReason reason_ = CompletionReason::horizon;

  ModeKind mode_ = ModeKind::idle;
  ExecutionMode logged_mode_;
  bool mode_logged_ = false;

  std::size_t solo_site_ = 0;
  std::uint64_t solo_token_ = 0;

  std::vector<std::size_t> participants_;
  Seconds round_start_ = 0;
  Seconds round_deadline_ = 0;
  ModelState round_theta_;
  std::uint64_t round_token_ = 0;
  std::uint64_t round_index_ = 0;
  std::uint64_t commit_index_ = 0;
};

}  // namespace

RunResult run(const Scenario& scenario, const TraceSet& traces, const RunOptions& options) {
  scenario.validate();
  check_traces(scenario, traces);
  Simulation sim(scenario, traces, options);
  return sim.run();
}

}  // namespace curtail
