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

#include "curtail/provisioner.hpp"

namespace curtail {

namespace ls = lifecycle;

std::string_view to_string(LifecycleEventKind kind) {
  switch (kind) {
    case LifecycleEventKind::ProvisionRequested: return "ProvisionRequested";
    case LifecycleEventKind::SiteReady: return "SiteReady";
    case LifecycleEventKind::DeprovisionRequested: return "DeprovisionRequested";
    case LifecycleEventKind::DrainComplete: return "DrainComplete";
    case LifecycleEventKind::SiteOffline: return "SiteOffline";
  }
  return "?";
}

std::string_view state_name(const LifecycleState& state) {
  static constexpr std::string_view names[] = {"Offline", "ArmingUp", "Provisioning",
                                               "Active", "ArmingDown", "Draining"};
  return names[state.index()];
}

bool SiteLifecycle::is_up() const {
  return std::holds_alternative<ls::Active>(state_) || std::holds_alternative<ls::ArmingDown>(state_);
}

void SiteLifecycle::check_time(Seconds t) {
  if (t < last_time_) {
    throw Error("site '" + site_id_ + "': time regression (" + std::to_string(t) + " < " +
                std::to_string(last_time_) + ")");
  }
}

std::vector<LifecycleEvent> SiteLifecycle::observe_signal(const HysteresisParams& params, Seconds t,
                                                          bool curtailed) {
  check_time(t);
  std::vector<LifecycleEvent> out;
  // Timers that expired strictly before t saw the previous signal.
  fire_deadlines(params, t, false, out);
  apply_signal(t, curtailed);
  fire_deadlines(params, t, true, out);
  last_time_ = t;
  return out;
}

void SiteLifecycle::apply_signal(Seconds t, bool curtailed) {
  last_signal_ = curtailed;
  if (std::holds_alternative<ls::Offline>(state_)) {
    if (curtailed) state_ = ls::ArmingUp{t};
  } else if (std::holds_alternative<ls::ArmingUp>(state_)) {
    if (!curtailed) state_ = ls::Offline{};
  } else if (std::holds_alternative<ls::Active>(state_)) {
    if (!curtailed) state_ = ls::ArmingDown{t};
  } else if (std::holds_alternative<ls::ArmingDown>(state_)) {
    if (curtailed) state_ = ls::Active{active_since_};
  }
  // Provisioning cannot be aborted; Draining ignores the signal.
}

void SiteLifecycle::fire_deadlines(const HysteresisParams& params, Seconds t, bool inclusive,
                                   std::vector<LifecycleEvent>& out) {
  const auto due = [&](Seconds d) { return inclusive ? d <= t : d < t; };
  for (;;) {
    if (const auto* up = std::get_if<ls::ArmingUp>(&state_)) {
      const Seconds d = up->signal_high_since + params.tau_up;
      if (!due(d)) return;
      out.push_back({d, site_id_, LifecycleEventKind::ProvisionRequested});
      state_ = ls::Provisioning{d + params.provision_delay};
    } else if (const auto* prov = std::get_if<ls::Provisioning>(&state_)) {
      const Seconds r = prov->ready_at;
      if (!due(r)) return;
      out.push_back({r, site_id_, LifecycleEventKind::SiteReady});
      active_since_ = r;
      if (last_signal_) {
        state_ = ls::Active{r};
      } else {
        state_ = ls::ArmingDown{r};
      }
    } else if (const auto* down = std::get_if<ls::ArmingDown>(&state_)) {
      const Seconds d = down->signal_low_since + params.tau_down;
      if (!due(d)) return;
      out.push_back({d, site_id_, LifecycleEventKind::DeprovisionRequested});
      state_ = ls::Draining{d};
    } else {
      return;
    }
  }
}

std::optional<Seconds> SiteLifecycle::next_deadline(const HysteresisParams& params) const {
  if (const auto* up = std::get_if<ls::ArmingUp>(&state_)) return up->signal_high_since + params.tau_up;
  if (const auto* prov = std::get_if<ls::Provisioning>(&state_)) return prov->ready_at;
  if (const auto* down = std::get_if<ls::ArmingDown>(&state_)) return down->signal_low_since + params.tau_down;
  return std::nullopt;
}

void SiteLifecycle::begin_drain(Seconds t) {
  if (!is_up()) {
    throw Error("site '" + site_id_ + "': cannot drain from state " + std::string(state_name(state_)));
  }
  check_time(t);
  state_ = ls::Draining{t};
  last_time_ = t;
}

std::vector<LifecycleEvent> SiteLifecycle::complete_drain(Seconds t) {
  if (!is_draining()) {
    throw Error("site '" + site_id_ + "': complete_drain from state " + std::string(state_name(state_)));
  }
  check_time(t);
  std::vector<LifecycleEvent> out{{t, site_id_, LifecycleEventKind::DrainComplete},
                                  {t, site_id_, LifecycleEventKind::SiteOffline}};
  state_ = last_signal_ ? LifecycleState{ls::ArmingUp{t}} : LifecycleState{ls::Offline{}};
  last_time_ = t;
  return out;
}

}  // namespace curtail
