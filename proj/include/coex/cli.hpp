// SPDX-License-Identifier: Apache-2.0
//
// coexsim - system-level simulator for eMBB macro / URLLC factory coexistence
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coex {

/// Bad command line; mapped to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Command {
  enum class Kind { Run, SweepIsolation, Capacity, Table1, McsTable, Validate, DefaultConfig, Layout, Help };

  Kind kind = Kind::Help;
  std::string help_text;

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> drops;
  std::string out_dir = ".";
  unsigned threads = 1;

  std::string grid = "0:5:120,inf";
  std::string direction = "both";
  std::optional<double> lo, hi, tol;

  std::string pattern_a, pattern_b;
  std::string mode = "marginal";
  double gap_db = 3.0;
};

/// Throws UsageError on unknown flags, missing arguments or malformed overrides.
Command parse_args(int argc, const char* const* argv);

/// Runs a parsed command. Returns 0, 2 (config error) or 3 (campaign failure).
int execute(const Command& cmd, std::ostream& out, std::ostream& err);

/// parse_args + execute with error mapping.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coex
