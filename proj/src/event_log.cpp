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

#include "curtail/event_log.hpp"

#include <array>
#include <sstream>

namespace curtail {

namespace {

constexpr std::array<std::string_view, 12> kKindNames = {
    "SignalChange", "ProvisionRequested", "SiteReady",   "ModeChange",     "RoundStart",   "RoundJoin",
    "RoundCommit",  "SoloCommit",         "DeprovisionRequested", "DrainComplete", "SiteOffline", "RunComplete",
};

}  // namespace

std::string_view to_string(EventKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<EventKind> event_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

nlohmann::ordered_json LogEvent::to_json() const {
  nlohmann::ordered_json j;
  j["t"] = t;
  j["seq"] = seq;
  j["kind"] = std::string(to_string(kind));
  for (const auto& [k, v] : payload.items()) j[k] = v;
  return j;
}

const LogEvent& EventLog::append(Seconds t, EventKind kind, nlohmann::ordered_json payload) {
  events_.push_back({t, events_.size(), kind, std::move(payload)});
  return events_.back();
}

std::string EventLog::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    out += e.to_json().dump();
    out += '\n';
  }
  return out;
}

EventLog EventLog::from_jsonl(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!j.contains("t") || !j.contains("seq") || !j.contains("kind")) {
      throw ParseError(line_no, "event needs t, seq and kind");
    }
    const auto kind = event_kind_from_string(j["kind"].get<std::string>());
    if (!kind) throw ParseError(line_no, "unknown event kind");
    LogEvent e{j["t"].get<Seconds>(), j["seq"].get<std::uint64_t>(), *kind, nlohmann::ordered_json::object()};
    for (const auto& [k, v] : j.items()) {
      if (k != "t" && k != "seq" && k != "kind") e.payload[k] = v;
    }
    log.events_.push_back(std::move(e));
  }
  return log;
}

EventLog EventLog::from_jsonl(const std::string& text) {
  std::istringstream in(text);
  return from_jsonl(in);
}

}  // namespace curtail
