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

#include <limits>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "curtail/common.hpp"

namespace curtail {

struct HysteresisParams {
  Seconds tau_up = 10;
  Seconds tau_down = 600;
  Seconds provision_delay = 300;
};

enum class LifecycleEventKind { ProvisionRequested, SiteReady, DeprovisionRequested, DrainComplete, SiteOffline };

std::string_view to_string(LifecycleEventKind kind);

struct LifecycleEvent {
  Seconds time;
  SiteId site_id;
  LifecycleEventKind kind;

  bool operator==(const LifecycleEvent&) const = default;
};

namespace lifecycle {
struct Offline {};
struct ArmingUp { Seconds signal_high_since; };
struct Provisioning { Seconds ready_at; };
struct Active { Seconds since; };
struct ArmingDown { Seconds signal_low_since; };
struct Draining { Seconds since; };
}  // namespace lifecycle

using LifecycleState = std::variant<lifecycle::Offline, lifecycle::ArmingUp, lifecycle::Provisioning,
                                    lifecycle::Active, lifecycle::ArmingDown, lifecycle::Draining>;

std::string_view state_name(const LifecycleState& state);

/// Hysteresis-debounced provisioning state machine of one site.
///
/// The machine is driven with the site's curtailment signal at every signal
/// change and at every deadline reported by next_deadline(). Timers that
/// expire at the same instant as a signal change observe the new signal, so
/// a pulse lasting exactly tau_up (or a gap lasting exactly tau_down) does
/// not trigger a transition.
class SiteLifecycle {
 public:
  explicit SiteLifecycle(SiteId site_id) : site_id_(std::move(site_id)) {}

  const SiteId& site_id() const { return site_id_; }
  const LifecycleState& state() const { return state_; }
  bool last_signal() const { return last_signal_; }
  Seconds last_time() const { return last_time_; }

  /// Active or ArmingDown: the site is up and eligible to train.
  bool is_up() const;
  bool is_draining() const { return std::holds_alternative<lifecycle::Draining>(state_); }

  std::vector<LifecycleEvent> observe_signal(const HysteresisParams& params, Seconds t, bool curtailed);

  /// Next instant at which a pending timer fires, if any.
  std::optional<Seconds> next_deadline(const HysteresisParams& params) const;

  /// Forces Active/ArmingDown into Draining. Throws for any other state.
  void begin_drain(Seconds t);

  /// Draining -> Offline; emits DrainComplete and SiteOffline. If the signal is
  /// still high, re-arms immediately (tau_up applies again).
  std::vector<LifecycleEvent> complete_drain(Seconds t);

 private:
  void check_time(Seconds t);
  void fire_deadlines(const HysteresisParams& params, Seconds t, bool inclusive, std::vector<LifecycleEvent>& out);
  void apply_signal(Seconds t, bool curtailed);

  SiteId site_id_;
  LifecycleState state_ = lifecycle::Offline{};
  Seconds active_since_ = 0;
  Seconds last_time_ = std::numeric_limits<Seconds>::min();
  bool last_signal_ = false;
};

}  // namespace curtail
