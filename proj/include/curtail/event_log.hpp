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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "curtail/common.hpp"

namespace curtail {

enum class EventKind {
  SignalChange,
  ProvisionRequested,
  SiteReady,
  ModeChange,
  RoundStart,
  RoundJoin,
  RoundCommit,
  SoloCommit,
  DeprovisionRequested,
  DrainComplete,
  SiteOffline,
  RunComplete,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

struct LogEvent {
  Seconds t;
  std::uint64_t seq;
  EventKind kind;
  nlohmann::ordered_json payload;  // kind-specific fields, in emission order

  /// {"t":..,"seq":..,"kind":..,<payload fields>}
  nlohmann::ordered_json to_json() const;
};

/// Totally ordered run timeline; seq is the insertion index.
class EventLog {
 public:
  const LogEvent& append(Seconds t, EventKind kind, nlohmann::ordered_json payload = nlohmann::ordered_json::object());

  const std::vector<LogEvent>& events() const { return events_; }
  std::vector<LogEvent>& mutable_events() { return events_; }
  std::size_t size() const { return events_.size(); }

  /// One compact JSON object per line, LF-terminated.
  std::string to_jsonl() const;
  static EventLog from_jsonl(std::istream& in);
  static EventLog from_jsonl(const std::string& text);

 private:
  std::vector<LogEvent> events_;
};

}  // namespace curtail
