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
#include "coex/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>

#include "coex/config.hpp"
#include "coex/engine.hpp"
#include "coex/linkadapt.hpp"
#include "coex/tdd.hpp"

namespace coex {

namespace {

bool valid_override(const std::string& s) {
  const auto eq = s.find('=');
  return eq != std::string::npos && eq > 0 && s.front() != '.' && s[eq - 1] != '.';
}

std::string pct(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g%%", 100.0 * p);
  return buf;
}

ScenarioConfig resolved_config(const Command& cmd) {
  std::vector<std::string> ov = cmd.overrides;
  if (cmd.seed) ov.push_back("master_seed=" + std::to_string(*cmd.seed));
  if (cmd.drops) ov.push_back("drops=" + std::to_string(*cmd.drops));
  if (cmd.lo) ov.push_back("capacity.lo=" + format_number(*cmd.lo));
  if (cmd.hi) ov.push_back("capacity.hi=" + format_number(*cmd.hi));
  if (cmd.tol) ov.push_back("capacity.tol=" + format_number(*cmd.tol));
  return load_config(cmd.config_path, ov);
}

std::string out_path(const Command& cmd, const std::string& name) {
  std::filesystem::create_directories(cmd.out_dir);
  return (std::filesystem::path(cmd.out_dir) / name).string();
}

void write_pair(const Command& cmd, const std::string& stem, const std::string& csv, const ScenarioConfig& cfg,
                nlohmann::json extra = nlohmann::json::object()) {
  write_text_file(out_path(cmd, stem + ".csv"), csv);
  nlohmann::json side = provenance_json(cfg);
  for (auto it = extra.begin(); it != extra.end(); ++it) side[it.key()] = it.value();
  write_text_file(out_path(cmd, stem + ".json"), side.dump(2) + "\n");
}

}  // namespace

Command parse_args(int argc, const char* const* argv) {
  Command cmd;
  CLI::App app{"System-level simulator for eMBB macro / URLLC factory coexistence", "coexsim"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int drops = 0;
  auto* o_seed = app.add_option("--seed", seed, "Master seed override");
  auto* o_drops = app.add_option("--drops", drops, "Number of drops override")->check(CLI::PositiveNumber);
  app.add_option("--out", cmd.out_dir, "Output directory");
  app.add_option("--threads", cmd.threads, "Drop parallelism (0 = auto)");

  auto add_cfg = [&](CLI::App* sub) {
    sub->add_option("config", cmd.config_path, "Scenario config (JSON)")->required();
    sub->add_option("--set", cmd.overrides, "dotted.key=value override")->take_all();
  };
  auto* run = app.add_subcommand("run", "Run a campaign");
  add_cfg(run);
  auto* sweep = app.add_subcommand("sweep-isolation", "Relative URLLC capacity versus extra isolation");
  add_cfg(sweep);
  sweep->add_option("--grid", cmd.grid, "Isolation values in dB, e.g. 0:5:120,inf");
  auto* cap = app.add_subcommand("capacity", "URLLC system capacity by bisection");
  add_cfg(cap);
  cap->add_option("--direction", cmd.direction, "dl, ul or both")->check(CLI::IsMember({"dl", "ul", "both"}));
  double lo = 0, hi = 0, tol = 0;
  auto* o_lo = cap->add_option("--lo", lo, "Lower bracket (packets/s/m^2)");
  auto* o_hi = cap->add_option("--hi", hi, "Upper bracket");
  auto* o_tol = cap->add_option("--tol", tol, "Bracket tolerance");
  auto* t1 = app.add_subcommand("table1", "Interference-scenario probabilities for two TDD patterns");
  t1->add_option("pattern_a", cmd.pattern_a, "First network's pattern")->required();
  t1->add_option("pattern_b", cmd.pattern_b, "Second network's pattern")->required();
  t1->add_option("--mode", cmd.mode, "aligned or marginal")->check(CLI::IsMember({"aligned", "marginal"}));
  auto* mcs = app.add_subcommand("mcs-table", "Print the MCS set with SINR thresholds");
  mcs->add_option("--gap", cmd.gap_db, "Shannon gap in dB");
  auto* val = app.add_subcommand("validate", "Check a config without running");
  add_cfg(val);
  auto* def = app.add_subcommand("default-config", "Print the default config");
  auto* lay = app.add_subcommand("layout", "Print the network layout of a config");
  add_cfg(lay);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    cmd.kind = Command::Kind::Help;
    cmd.help_text = app.help();
    return cmd;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (*o_seed) cmd.seed = seed;
  if (*o_drops) cmd.drops = drops;
  if (*o_lo) cmd.lo = lo;
  if (*o_hi) cmd.hi = hi;
  if (*o_tol) cmd.tol = tol;
  for (const auto& s : cmd.overrides)
    if (!valid_override(s)) throw UsageError("malformed override '" + s + "', expected key=value");

  if (*run) cmd.kind = Command::Kind::Run;
  else if (*sweep) cmd.kind = Command::Kind::SweepIsolation;
  else if (*cap) cmd.kind = Command::Kind::Capacity;
  else if (*t1) cmd.kind = Command::Kind::Table1;
  else if (*mcs) cmd.kind = Command::Kind::McsTable;
  else if (*val) cmd.kind = Command::Kind::Validate;
  else if (*def) cmd.kind = Command::Kind::DefaultConfig;
  else if (*lay) cmd.kind = Command::Kind::Layout;
  return cmd;
}

int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
  using K = Command::Kind;
  try {
    switch (cmd.kind) {
      case K::Help:
        out << cmd.help_text;
        return 0;
      case K::Table1: {
        TddPattern a, b;
        ScenarioMode mode;
        try {
          a = parse_pattern(cmd.pattern_a);
          b = parse_pattern(cmd.pattern_b);
          mode = parse_scenario_mode(cmd.mode);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        const ScenarioMix ab = scenario_probabilities(a, b, mode);
        const ScenarioMix ba = scenario_probabilities(b, a, mode);
        char line[160];
        std::snprintf(line, sizeof line, "%-24s %-14s %-14s\n", "Scenario",
                      (to_string(a) + "->" + to_string(b)).c_str(), (to_string(b) + "->" + to_string(a)).c_str());
        out << line;
        for (auto s : kScenarioRows) {
          std::snprintf(line, sizeof line, "%-24s %-14s %-14s\n", to_string(s).c_str(), pct(ab[s]).c_str(),
                        pct(ba[s]).c_str());
          out << line;
        }
        return 0;
      }
      case K::McsTable:
        out << mcs_table_csv(McsTable(cmd.gap_db));
        return 0;
      case K::DefaultConfig:
        out << to_json(ScenarioConfig{}).dump(2) << "\n";
        return 0;
      case K::Validate: {
        const ScenarioConfig cfg = resolved_config(cmd);
        out << "config ok (hash " << provenance_json(cfg)["provenance"]["config_hash"].get<std::string>() << ")\n";
        return 0;
      }
      case K::Layout: {
        const ScenarioConfig cfg = resolved_config(cmd);
        out << layout_to_json(build_layout(cfg.layout_params())).dump(2) << "\n";
        return 0;
      }
      case K::Run: {
        const ScenarioConfig cfg = resolved_config(cmd);
        const CampaignResult r = run_campaign(cfg, {cmd.threads});
        const std::string csv = campaign_csv(r);
        write_pair(cmd, "results", csv, cfg, {{"failed_drops", r.failed_drops}});
        out << csv;
        return 0;
      }
      case K::SweepIsolation: {
        const ScenarioConfig cfg = resolved_config(cmd);
        std::vector<double> grid;
        try {
          grid = parse_grid(cmd.grid);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        const SweepResult r = sweep_isolation(cfg, grid, {cmd.threads});
        const std::string csv = sweep_csv(r);
        write_pair(cmd, "sweep", csv, cfg, {{"grid", cmd.grid}});
        out << csv;
        return 0;
      }
      case K::Capacity: {
        const ScenarioConfig cfg = resolved_config(cmd);
        const ResolvedScenario sc = ResolvedScenario::resolve(cfg);
        const auto models = build_drop_models(sc, {cmd.threads});
        const auto caps = campaign_capacity(models, cfg, cfg.extra_isolation_db, {cmd.threads});
        std::vector<CapacityResult> shown;
        for (const auto& c : caps)
          if (cmd.direction == "both" || cmd.direction == to_string(c.direction)) shown.push_back(c);
        const std::string csv = capacity_csv(cfg, shown);
        write_pair(cmd, "capacity", csv, cfg);
        out << csv;
        return 0;
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CampaignError& e) {
    err << "campaign failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse_args(argc, argv);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }
  return execute(cmd, out, err);
}

}  // namespace coex
