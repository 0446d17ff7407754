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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coex/antenna.hpp"
#include "coex/geometry.hpp"
#include "coex/linkadapt.hpp"
#include "coex/propagation.hpp"
#include "coex/radio.hpp"
#include "coex/tdd.hpp"
#include "coex/traffic.hpp"

namespace coex {

/// Raised for malformed or inconsistent configuration; mapped to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Deployment { CoChannel, AdjacentChannel };
enum class SyncMode { Synchronized, Unsynchronized };
enum class CapacityAveraging { Harmonic, Arithmetic };

std::string to_string(Deployment d);
std::string to_string(SyncMode s);
std::string to_string(CapacityAveraging a);

struct NetworkConfig {
  std::string tdd_pattern = "auto";  // "auto" follows sync_mode
  double bs_height_m = 25.0;
  double bs_tx_power_dbm = 50.0;
  double ue_tx_power_dbm = 23.0;
  double bs_noise_figure_db = 5.0;
  double ue_noise_figure_db = 9.0;
  double downtilt_deg = 10.0;
  std::array<int, 5> array{8, 8, 1, 1, 2};  // V, H, Vs, Hs, Ps
  double max_element_gain_dbi = 8.0;
  double hpbw_deg = 65.0;
  double side_lobe_db = 30.0;
  double front_back_db = 30.0;
  double pc_alpha = 0.8;
  double pc_target_snr_db = 10.0;
};

struct ScenarioConfig {
  std::string scenario_id = "default";
  double frequency_ghz = 3.5;
  double bandwidth_mhz = 50.0;
  Deployment deployment = Deployment::CoChannel;
  SyncMode sync_mode = SyncMode::Unsynchronized;
  std::optional<ScenarioMode> scenario_mode;  // unset: aligned iff synchronized
  Placement placement = Placement::NearBS;

  double isd_m = 500.0;
  double near_bs_offset_m = 30.0;
  double factory_width_m = 100.0;
  double factory_depth_m = 100.0;
  double factory_height_m = 10.0;
  double ue_height_m = 1.5;

  NetworkConfig macro;
  NetworkConfig factory{"auto", 8.0, 27.0, 23.0, 5.0, 9.0, 10.0, {2, 4, 2, 1, 2}, 8.0, 65.0, 30.0, 30.0, 0.8, 10.0};

  double wall_loss_db = 13.0;
  double wall_angular_coeff_db = 20.0;
  bool full_isolation = false;
  double extra_isolation_db = 0.0;
  double indoor_loss_db_per_m = 0.5;
  PathlossModel macro_factory_bs_model = PathlossModel::UMa;
  DistancePolicy distance_policy = DistancePolicy::Clamp;
  bool shadowing = true;

  // BS-to-UE interfering links. Unset: each panel loses its own array gain,
  // which is the mean gain of a beam steered elsewhere.
  std::optional<double> interf_beam_backoff_db;
  double bs_to_bs_backoff_db = 0.0;

  AcirParams acir;
  std::optional<double> acir_override_db;

  double urllc_arrival_density = 5.0;   // packets/s/m^2
  double embb_area_density_mbps_km2 = 100.0;
  double dl_share = 0.5;
  bool macro_full_load = false;

  QosRequirement qos;
  double slot_duration_us = 143.0;
  double processing_us = 300.0;
  double shannon_gap_db = 3.0;
  double overhead = 0.2;

  SinrMode reliability_sinr_mode = SinrMode::Mean;
  CapacityAveraging capacity_averaging = CapacityAveraging::Harmonic;
  CouplingParams coupling;
  double availability_threshold_pct = 100.0;

  int drops = 50;
  int urllc_samples = 2000;
  int embb_users = 210;
  int polygon_probe_users = 40;
  double polygon_margin_m = 15.0;
  std::uint64_t master_seed = 1;

  double capacity_lo = 0.0;
  double capacity_hi = 400.0;
  double capacity_tol = 0.25;

  // Derived views.
  TddPattern macro_pattern() const;
  TddPattern factory_pattern() const;
  ScenarioMode effective_scenario_mode() const;
  LayoutParams layout_params() const;
  PropagationParams propagation_params() const;
  ArrayConfig macro_array(double azimuth_deg) const;
  ArrayConfig factory_array(double azimuth_deg) const;
  double bandwidth_hz() const { return bandwidth_mhz * 1e6; }
};

/// Every key, with defaults. Keys are sorted, so dumps are canonical.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Strict reader: unknown keys and type mismatches raise ConfigError.
ScenarioConfig config_from_json(const nlohmann::json& j);

/// Applies `dotted.key=value` to a config tree. The value is parsed as JSON
/// when possible and as a bare string otherwise.
void apply_override(nlohmann::json& tree, std::string_view assignment);

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Checks cross-field invariants. Throws ConfigError.
void validate(const ScenarioConfig& cfg);

/// FNV-1a 64 of the canonical JSON dump.
std::uint64_t config_hash(const ScenarioConfig& cfg);

}  // namespace coex
