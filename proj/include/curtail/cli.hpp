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

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

namespace curtail::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitRuntime = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> horizon;
};

int cmd_validate(const std::filesystem::path& scenario, const std::filesystem::path& traces, std::ostream& out,
                 std::ostream& err);

int cmd_run(const std::filesystem::path& scenario, const std::filesystem::path& traces,
            const std::filesystem::path& out_dir, const Overrides& overrides, std::ostream& out, std::ostream& err);

/// Runs every scenario into `<out_dir>/<scenario name>/` and writes
/// compare.csv and compare.txt side by side.
int cmd_compare(const std::vector<std::filesystem::path>& scenarios, const std::filesystem::path& traces,
                const std::filesystem::path& out_dir, const Overrides& overrides, std::ostream& out,
                std::ostream& err);

/// Parses argv (validate | run | compare) and dispatches.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace curtail::cli
