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
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coex/cli.hpp"

using namespace coex;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "coexsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Command parse(std::vector<std::string> args) {
  args.insert(args.begin(), "coexsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

std::string temp_config(const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / "coex_cli_test.json";
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("subcommands and flags") {
  const Command c = parse({"--seed", "9", "--threads", "2", "run", "cfg.json", "--set", "drops=3", "placement=center"});
  CHECK(c.kind == Command::Kind::Run);
  CHECK(c.config_path == "cfg.json");
  CHECK(c.seed == 9u);
  CHECK(c.threads == 2u);
  CHECK(c.overrides == std::vector<std::string>{"drops=3", "placement=center"});

  const Command s = parse({"sweep-isolation", "x.json", "--grid", "0:10:50"});
  CHECK(s.kind == Command::Kind::SweepIsolation);
  CHECK(s.grid == "0:10:50");

  const Command k = parse({"capacity", "x.json", "--direction", "ul", "--tol", "0.5"});
  CHECK(k.kind == Command::Kind::Capacity);
  CHECK(k.direction == "ul");
  CHECK(k.tol == 0.5);
  CHECK_FALSE(k.lo);

  const Command t = parse({"table1", "DDDU", "DUDU", "--mode", "aligned"});
  CHECK(t.kind == Command::Kind::Table1);
  CHECK(t.pattern_b == "DUDU");
  CHECK(parse({"mcs-table"}).kind == Command::Kind::McsTable);
  CHECK(parse({"default-config"}).kind == Command::Kind::DefaultConfig);
  CHECK(parse({"--help"}).kind == Command::Kind::Help);
}

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(parse({}), UsageError);
  CHECK_THROWS_AS(parse({"frobnicate"}), UsageError);
  CHECK_THROWS_AS(parse({"run"}), UsageError);
  CHECK_THROWS_AS(parse({"run", "c.json", "--set", "drops"}), UsageError);
  CHECK_THROWS_AS(parse({"run", "c.json", "--set", "=4"}), UsageError);
  CHECK_THROWS_AS(parse({"capacity", "c.json", "--direction", "sideways"}), UsageError);
  CHECK_THROWS_AS(parse({"--drops", "0", "run", "c.json"}), UsageError);
  CHECK(run({"run"}).code == 2);
  CHECK(run({"table1", "DXDU", "DUDU"}).code == 2);
}

TEST_CASE("table1 output") {
  const Result r = run({"table1", "DDDU", "DUDU"});
  CHECK(r.code == 0);
  CHECK(r.out.find("DDDU->DUDU") != std::string::npos);
  CHECK(r.out.find("12.5%") != std::string::npos);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
}

TEST_CASE("config handling") {
  CHECK(run({"validate", "/nonexistent/coex.json"}).code == 2);
  const std::string bad = temp_config(R"({"drops": -1})");
  const Result b = run({"validate", bad});
  CHECK(b.code == 2);
  CHECK(b.err.find("config error") != std::string::npos);
  const std::string good = temp_config(R"({"scenario_id": "cli"})");
  const Result g = run({"validate", good});
  CHECK(g.code == 0);
  CHECK(g.out.find("config ok") != std::string::npos);
  CHECK(run({"validate", good, "--set", "bogus=1"}).code == 2);
  const Result d = run({"default-config"});
  CHECK(d.code == 0);
  CHECK(d.out.find("\"placement\"") != std::string::npos);
  CHECK(run({"mcs-table"}).code == 0);
  CHECK(run({"layout", good}).out.find("\"sites\"") != std::string::npos);
}

TEST_CASE("run writes results with provenance") {
  const auto dir = std::filesystem::temp_directory_path() / "coex_cli_run";
  std::filesystem::remove_all(dir);
  const std::string cfg = temp_config(R"({"drops": 2, "urllc_samples": 100, "embb_users": 42})");
  const Result r = run({"--out", dir.string(), "run", cfg});
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(dir / "results.csv"));
  CHECK(std::filesystem::exists(dir / "results.json"));
  std::ifstream in(dir / "results.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == r.out);
  std::filesystem::remove_all(dir);
}
