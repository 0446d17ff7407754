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

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "coex/config.hpp"
#include "coex/metrics.hpp"
#include "coex/traffic.hpp"

namespace coex {

/// Raised when too many drops fail; mapped to exit code 3.
class CampaignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Network { Macro = 0, Factory = 1 };

/// Everything that is fixed for a configuration, shared read-only by all drops.
struct ResolvedScenario {
  ScenarioConfig cfg;
  NetworkLayout layout;
  TddPattern macro_pattern;
  TddPattern factory_pattern;
  std::array<DirectionFractions, 2> fraction;  // by Network
  /// cross_activity[victim network][aggressor dir][victim dir]: probability that
  /// the other network is in `aggressor dir` while the victim is in `victim dir`.
  std::array<std::array<std::array<double, 2>, 2>, 2> cross_activity{};
  /// acir_db[aggressor dir][victim dir]; 0 for co-channel.
  std::array<std::array<double, 2>, 2> acir_db{};
  std::array<bool, 2> factory_latency_ok{};
  McsTable mcs;
  double required_rate = 0.0;
  // Receiver noise in mW, [Network][Direction]: DL is received at the UE.
  std::array<std::array<double, 2>, 2> noise_mw{};
  int n_macro = 0;
  int n_factory = 3;

  static ResolvedScenario resolve(const ScenarioConfig& cfg);
  int n_cells() const { return n_macro + n_factory; }
  Network network_of(int cell) const { return cell < n_macro ? Network::Macro : Network::Factory; }
};

/// Received power (mW) at each receiver from each cell at full activity, co-channel.
/// Entries that never interfere (serving cell, own-network opposite direction) are 0.
struct VictimTable {
  Eigen::MatrixXd bs;       // aggressor transmitting downlink
  Eigen::MatrixXd ue_mean;  // aggressor cell's uplink UE population, mean
  Eigen::MatrixXd ue_max;   // same, strongest UE
};

struct ServedLinks {
  Eigen::ArrayXd signal_mw;
  std::vector<int> serving;  // global cell index
  std::vector<int> row;      // row of the VictimTable holding this link's interference
};

struct DropEvaluation {
  CellUtilization utilization;
  std::array<std::vector<std::uint8_t>, 2> indicators;  // URLLC samples, by Direction
  std::vector<EmbbUserRate> embb;                       // regular users, then ring probes
};

/// Immutable per-drop state: users, association and link tables. Evaluating a
/// new arrival rate or isolation reuses the tables, so every evaluation of a
/// drop sees the same random numbers.
class DropModel {
 public:
  DropModel(const ResolvedScenario& scenario, std::size_t drop_index);

  DropEvaluation evaluate(double urllc_arrival_density, double extra_isolation_db, bool with_embb_rates) const;

  std::size_t drop_index() const { return drop_index_; }
  std::uint64_t clamped_links() const { return clamped_; }
  const std::vector<std::size_t>& factory_association() const { return factory_assoc_; }

  // Exposed for tests.
  const VictimTable& urllc_dl_table() const { return urllc_dl_; }
  const VictimTable& factory_ul_table() const { return factory_ul_; }
  const VictimTable& embb_dl_table() const { return embb_dl_; }
  const VictimTable& macro_ul_table() const { return macro_ul_; }
  const ServedLinks& urllc_links(Direction d) const { return d == Direction::Downlink ? urllc_dl_links_ : urllc_ul_links_; }
  const ServedLinks& embb_links(Direction d) const { return d == Direction::Downlink ? embb_dl_links_ : embb_ul_links_; }
  const std::vector<Position>& urllc_positions() const { return urllc_pos_; }
  const std::vector<Position>& embb_positions() const { return embb_pos_; }
  std::size_t regular_embb_users() const { return n_regular_; }

  /// Per-cell interference weights for a victim of `victim` network in `victim_dir`.
  Eigen::VectorXd weights(const DirectionalLoad& activity, Network victim, Direction aggressor_dir,
                          Direction victim_dir, double extra_isolation_db) const;

  /// Linear SINR of every link in `links` for the given activities.
  Eigen::ArrayXd link_sinr(const VictimTable& table, const ServedLinks& links, Network victim, Direction dir,
                           const DirectionalLoad& activity, double extra_isolation_db, bool worst_case) const;

 private:
  DirectionalLoad capacity(const DirectionalLoad& u, double extra_isolation_db, bool macro_needed) const;

  const ResolvedScenario* sc_;
  std::size_t drop_index_;
  std::uint64_t clamped_ = 0;
  std::vector<Position> urllc_pos_;
  std::vector<Position> embb_pos_;  // regular users, then probes
  std::size_t n_regular_ = 0;
  std::vector<std::size_t> factory_assoc_;
  VictimTable urllc_dl_, factory_ul_, embb_dl_, macro_ul_;
  ServedLinks urllc_dl_links_, urllc_ul_links_, embb_dl_links_, embb_ul_links_;
};

struct DropResult {
  std::size_t drop_index = 0;
  std::array<AvailabilityResult, 2> availability;
  std::array<double, 2> macro_utilization{};
  std::array<double, 2> factory_utilization{};
  std::array<double, 2> embb_mean_rate{};
  RateStats polygon_dl;
  RateStats closest_sector_ul;
  int coupling_iterations = 0;
  bool converged = true;
  std::uint64_t clamped_links = 0;
};

DropResult summarize_drop(const ResolvedScenario& scenario, const DropModel& model, const DropEvaluation& ev);
DropResult run_drop(const ResolvedScenario& scenario, std::size_t drop_index);
DropResult run_drop(const ScenarioConfig& cfg, std::size_t drop_index);

struct MetricRow {
  std::string direction;  // "dl", "ul" or "all"
  std::string metric;
  double value = 0.0;
  double ci95 = 0.0;
  std::size_t drops = 0;
};

struct CampaignResult {
  ScenarioConfig config;
  std::vector<DropResult> drops;
  std::vector<std::size_t> failed_drops;
  std::vector<MetricRow> rows;
};

struct RunOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
};

CampaignResult run_campaign(const ScenarioConfig& cfg, const RunOptions& opts = {});

/// Builds the drop models of a campaign (in parallel).
std::vector<DropModel> build_drop_models(const ResolvedScenario& scenario, const RunOptions& opts);

/// Pooled URLLC availability over all drops, by Direction.
std::array<double, 2> campaign_availability(const std::vector<DropModel>& models, double urllc_arrival_density,
                                            double extra_isolation_db, const RunOptions& opts);

CapacitySearch capacity_search(const ScenarioConfig& cfg);

/// URLLC system capacity in both directions over shared drop models.
std::array<CapacityResult, 2> campaign_capacity(const std::vector<DropModel>& models, const ScenarioConfig& cfg,
                                                double extra_isolation_db, const RunOptions& opts);

struct SweepPoint {
  Direction direction = Direction::Downlink;
  double isolation_db = 0.0;
  CapacityResult capacity;
  double relative = 0.0;  // capacity / full-isolation capacity
};

struct SweepResult {
  ScenarioConfig config;
  std::array<CapacityResult, 2> reference;  // infinite isolation
  std::vector<SweepPoint> points;           // grid order, DL then UL per isolation value
};

/// Grid must be sorted ascending; +inf entries are allowed.
SweepResult sweep_isolation(const ScenarioConfig& cfg, const std::vector<double>& grid, const RunOptions& opts = {});

/// "0:5:120,inf" style list of values and ranges.
std::vector<double> parse_grid(const std::string& spec);

std::string format_number(double v);
std::string campaign_csv(const CampaignResult& r);
std::string sweep_csv(const SweepResult& r);
std::string capacity_csv(const ScenarioConfig& cfg, const std::vector<CapacityResult>& caps);

/// Resolved config plus provenance (config hash, seed, code version).
nlohmann::json provenance_json(const ScenarioConfig& cfg);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace coex
