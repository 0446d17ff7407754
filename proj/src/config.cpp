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
#include "coex/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace coex {

using nlohmann::json;

std::string to_string(Deployment d) { return d == Deployment::CoChannel ? "co_channel" : "adjacent_channel"; }
std::string to_string(SyncMode s) { return s == SyncMode::Synchronized ? "synchronized" : "unsynchronized"; }
std::string to_string(CapacityAveraging a) { return a == CapacityAveraging::Harmonic ? "harmonic" : "arithmetic"; }

namespace {

Deployment parse_deployment(const std::string& s) {
  if (s == "co_channel") return Deployment::CoChannel;
  if (s == "adjacent_channel") return Deployment::AdjacentChannel;
  throw ConfigError("deployment must be co_channel or adjacent_channel, got '" + s + "'");
}

SyncMode parse_sync(const std::string& s) {
  if (s == "synchronized") return SyncMode::Synchronized;
  if (s == "unsynchronized") return SyncMode::Unsynchronized;
  throw ConfigError("sync_mode must be synchronized or unsynchronized, got '" + s + "'");
}

CapacityAveraging parse_averaging(const std::string& s) {
  if (s == "harmonic") return CapacityAveraging::Harmonic;
  if (s == "arithmetic") return CapacityAveraging::Arithmetic;
  throw ConfigError("capacity_averaging must be harmonic or arithmetic, got '" + s + "'");
}

DistancePolicy parse_policy(const std::string& s) {
  if (s == "clamp") return DistancePolicy::Clamp;
  if (s == "reject") return DistancePolicy::Reject;
  throw ConfigError("distance_policy must be clamp or reject, got '" + s + "'");
}

json network_json(const NetworkConfig& n) {
  return {
      {"tdd_pattern", n.tdd_pattern},
      {"bs_height_m", n.bs_height_m},
      {"bs_tx_power_dbm", n.bs_tx_power_dbm},
      {"ue_tx_power_dbm", n.ue_tx_power_dbm},
      {"bs_noise_figure_db", n.bs_noise_figure_db},
      {"ue_noise_figure_db", n.ue_noise_figure_db},
      {"downtilt_deg", n.downtilt_deg},
      {"array", n.array},
      {"max_element_gain_dbi", n.max_element_gain_dbi},
      {"hpbw_deg", n.hpbw_deg},
      {"side_lobe_db", n.side_lobe_db},
      {"front_back_db", n.front_back_db},
      {"pc_alpha", n.pc_alpha},
      {"pc_target_snr_db", n.pc_target_snr_db},
  };
}

NetworkConfig network_from(const json& j) {
  NetworkConfig n;
  n.tdd_pattern = j.at("tdd_pattern").get<std::string>();
  n.bs_height_m = j.at("bs_height_m").get<double>();
  n.bs_tx_power_dbm = j.at("bs_tx_power_dbm").get<double>();
  n.ue_tx_power_dbm = j.at("ue_tx_power_dbm").get<double>();
  n.bs_noise_figure_db = j.at("bs_noise_figure_db").get<double>();
  n.ue_noise_figure_db = j.at("ue_noise_figure_db").get<double>();
  n.downtilt_deg = j.at("downtilt_deg").get<double>();
  n.array = j.at("array").get<std::array<int, 5>>();
  n.max_element_gain_dbi = j.at("max_element_gain_dbi").get<double>();
  n.hpbw_deg = j.at("hpbw_deg").get<double>();
  n.side_lobe_db = j.at("side_lobe_db").get<double>();
  n.front_back_db = j.at("front_back_db").get<double>();
  n.pc_alpha = j.at("pc_alpha").get<double>();
  n.pc_target_snr_db = j.at("pc_target_snr_db").get<double>();
  return n;
}

// Checks `user` against the shape of `base` and writes accepted values into it.
void merge_strict(json& base, const json& user, const std::string& where) {
  if (!user.is_object()) throw ConfigError(where.empty() ? "config must be a JSON object" : where + " must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown config key '" + key + "'");
    json& slot = base[it.key()];
    const json& v = it.value();
    if (slot.is_object()) {
      merge_strict(slot, v, key);
      continue;
    }
    bool ok = false;
    if (slot.is_null())
      ok = v.is_null() || v.is_number();
    else if (slot.is_boolean())
      ok = v.is_boolean();
    else if (slot.is_number_integer())
      ok = v.is_number_integer() && (!slot.is_number_unsigned() || v.get<std::int64_t>() >= 0);
    else if (slot.is_number())
      ok = v.is_number();
    else if (slot.is_string())
      ok = v.is_string();
    else if (slot.is_array())
      ok = v.is_array() && v.size() == slot.size() &&
           std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); });
    if (!ok) throw ConfigError("config key '" + key + "' has the wrong type");
    slot = v;
  }
}

}  // namespace

TddPattern ScenarioConfig::macro_pattern() const {
  const std::string p = macro.tdd_pattern != "auto" ? macro.tdd_pattern
                        : sync_mode == SyncMode::Synchronized ? "DUDU"
                                                              : "DDDU";
  return parse_pattern(p, slot_duration_us);
}

TddPattern ScenarioConfig::factory_pattern() const {
  return parse_pattern(factory.tdd_pattern != "auto" ? factory.tdd_pattern : "DUDU", slot_duration_us);
}

ScenarioMode ScenarioConfig::effective_scenario_mode() const {
  if (scenario_mode) return *scenario_mode;
  return sync_mode == SyncMode::Synchronized ? ScenarioMode::Aligned : ScenarioMode::Marginal;
}

LayoutParams ScenarioConfig::layout_params() const {
  LayoutParams p;
  p.isd = isd_m;
  p.macro_height = macro.bs_height_m;
  p.factory_width = factory_width_m;
  p.factory_depth = factory_depth_m;
  p.factory_height = factory_height_m;
  p.factory_bs_height = factory.bs_height_m;
  p.factory_downtilt_deg = factory.downtilt_deg;
  p.placement = placement;
  p.near_bs_offset = near_bs_offset_m;
  return p;
}

PropagationParams ScenarioConfig::propagation_params() const {
  PropagationParams p;
  p.fc_ghz = frequency_ghz;
  p.wall_perp_db = wall_loss_db;
  p.wall_angular_coeff_db = wall_angular_coeff_db;
  p.indoor_db_per_m = indoor_loss_db_per_m;
  p.full_isolation = full_isolation;
  p.macro_factory_bs_model = macro_factory_bs_model;
  p.distance_policy = distance_policy;
  p.shadowing = shadowing;
  return p;
}

static ArrayConfig array_of(const NetworkConfig& n, double azimuth_deg) {
  ArrayConfig a;
  a.v = n.array[0];
  a.h = n.array[1];
  a.vs = n.array[2];
  a.hs = n.array[3];
  a.ps = n.array[4];
  a.max_element_gain_dbi = n.max_element_gain_dbi;
  a.downtilt_deg = n.downtilt_deg;
  a.azimuth_deg = azimuth_deg;
  a.hpbw_h_deg = n.hpbw_deg;
  a.hpbw_v_deg = n.hpbw_deg;
  a.sla_v_db = n.side_lobe_db;
  a.front_back_db = n.front_back_db;
  return a;
}

ArrayConfig ScenarioConfig::macro_array(double azimuth_deg) const { return array_of(macro, azimuth_deg); }
ArrayConfig ScenarioConfig::factory_array(double azimuth_deg) const { return array_of(factory, azimuth_deg); }

json to_json(const ScenarioConfig& c) {
  json j;
  j["scenario_id"] = c.scenario_id;
  j["frequency_ghz"] = c.frequency_ghz;
  j["bandwidth_mhz"] = c.bandwidth_mhz;
  j["deployment"] = to_string(c.deployment);
  j["sync_mode"] = to_string(c.sync_mode);
  j["scenario_mode"] = c.scenario_mode ? to_string(*c.scenario_mode) : std::string("auto");
  j["placement"] = to_string(c.placement);
  j["isd_m"] = c.isd_m;
  j["near_bs_offset_m"] = c.near_bs_offset_m;
  j["factory_width_m"] = c.factory_width_m;
  j["factory_depth_m"] = c.factory_depth_m;
  j["factory_height_m"] = c.factory_height_m;
  j["ue_height_m"] = c.ue_height_m;
  j["macro"] = network_json(c.macro);
  j["factory"] = network_json(c.factory);
  j["wall_loss_db"] = c.wall_loss_db;
  j["wall_angular_coeff_db"] = c.wall_angular_coeff_db;
  j["full_isolation"] = c.full_isolation;
  j["extra_isolation_db"] = c.extra_isolation_db;
  j["indoor_loss_db_per_m"] = c.indoor_loss_db_per_m;
  j["macro_factory_bs_model"] = to_string(c.macro_factory_bs_model);
  j["distance_policy"] = c.distance_policy == DistancePolicy::Clamp ? "clamp" : "reject";
  j["shadowing"] = c.shadowing;
  j["interf_beam_backoff_db"] = c.interf_beam_backoff_db ? json(*c.interf_beam_backoff_db) : json(nullptr);
  j["bs_to_bs_backoff_db"] = c.bs_to_bs_backoff_db;
  j["acir"] = {{"aclr_bs", c.acir.aclr_bs}, {"acs_bs", c.acir.acs_bs}, {"aclr_ue", c.acir.aclr_ue},
               {"acs_ue", c.acir.acs_ue}};
  j["acir_override_db"] = c.acir_override_db ? json(*c.acir_override_db) : json(nullptr);
  j["traffic"] = {{"urllc_arrival_density", c.urllc_arrival_density},
                  {"embb_area_density_mbps_km2", c.embb_area_density_mbps_km2},
                  {"dl_share", c.dl_share}};
  j["macro_full_load"] = c.macro_full_load;
  j["qos"] = {{"payload_bits", c.qos.payload_bits},
              {"latency_budget_us", c.qos.latency_budget_us},
              {"reliability", c.qos.reliability},
              {"tti_us", c.qos.tti_us},
              {"symbols_per_tti", c.qos.symbols_per_tti},
              {"scs_khz", c.qos.scs_khz},
              {"slot_duration_us", c.slot_duration_us},
              {"processing_us", c.processing_us}};
  j["link"] = {{"shannon_gap_db", c.shannon_gap_db}, {"overhead", c.overhead}};
  j["reliability_sinr_mode"] = to_string(c.reliability_sinr_mode);
  j["capacity_averaging"] = to_string(c.capacity_averaging);
  j["coupling"] = {{"tolerance", c.coupling.tolerance},
                   {"max_iterations", c.coupling.max_iterations},
                   {"damping", c.coupling.damping}};
  j["availability_threshold_pct"] = c.availability_threshold_pct;
  j["drops"] = c.drops;
  j["urllc_samples"] = c.urllc_samples;
  j["embb_users"] = c.embb_users;
  j["polygon_probe_users"] = c.polygon_probe_users;
  j["polygon_margin_m"] = c.polygon_margin_m;
  j["master_seed"] = c.master_seed;
  j["capacity"] = {{"lo", c.capacity_lo}, {"hi", c.capacity_hi}, {"tol", c.capacity_tol}};
  return j;
}

ScenarioConfig config_from_json(const json& user) {
  json t = to_json(ScenarioConfig{});
  merge_strict(t, user, "");
  ScenarioConfig c;
  try {
    c.scenario_id = t["scenario_id"].get<std::string>();
    c.frequency_ghz = t["frequency_ghz"].get<double>();
    c.bandwidth_mhz = t["bandwidth_mhz"].get<double>();
    c.deployment = parse_deployment(t["deployment"].get<std::string>());
    c.sync_mode = parse_sync(t["sync_mode"].get<std::string>());
    const auto sm = t["scenario_mode"].get<std::string>();
    if (sm == "auto")
      c.scenario_mode.reset();
    else
      c.scenario_mode = parse_scenario_mode(sm);
    c.placement = parse_placement(t["placement"].get<std::string>());
    c.isd_m = t["isd_m"].get<double>();
    c.near_bs_offset_m = t["near_bs_offset_m"].get<double>();
    c.factory_width_m = t["factory_width_m"].get<double>();
    c.factory_depth_m = t["factory_depth_m"].get<double>();
    c.factory_height_m = t["factory_height_m"].get<double>();
    c.ue_height_m = t["ue_height_m"].get<double>();
    c.macro = network_from(t["macro"]);
    c.factory = network_from(t["factory"]);
    c.wall_loss_db = t["wall_loss_db"].get<double>();
    c.wall_angular_coeff_db = t["wall_angular_coeff_db"].get<double>();
    c.full_isolation = t["full_isolation"].get<bool>();
    c.extra_isolation_db = t["extra_isolation_db"].get<double>();
    c.indoor_loss_db_per_m = t["indoor_loss_db_per_m"].get<double>();
    c.macro_factory_bs_model = parse_pathloss_model(t["macro_factory_bs_model"].get<std::string>());
    c.distance_policy = parse_policy(t["distance_policy"].get<std::string>());
    c.shadowing = t["shadowing"].get<bool>();
    if (!t["interf_beam_backoff_db"].is_null()) c.interf_beam_backoff_db = t["interf_beam_backoff_db"].get<double>();
    c.bs_to_bs_backoff_db = t["bs_to_bs_backoff_db"].get<double>();
    const json& a = t["acir"];
    c.acir = {a["aclr_bs"].get<double>(), a["acs_bs"].get<double>(), a["aclr_ue"].get<double>(),
              a["acs_ue"].get<double>()};
    if (!t["acir_override_db"].is_null()) c.acir_override_db = t["acir_override_db"].get<double>();
    const json& tr = t["traffic"];
    c.urllc_arrival_density = tr["urllc_arrival_density"].get<double>();
    c.embb_area_density_mbps_km2 = tr["embb_area_density_mbps_km2"].get<double>();
    c.dl_share = tr["dl_share"].get<double>();
    c.macro_full_load = t["macro_full_load"].get<bool>();
    const json& q = t["qos"];
    c.qos.payload_bits = q["payload_bits"].get<double>();
    c.qos.latency_budget_us = q["latency_budget_us"].get<double>();
    c.qos.reliability = q["reliability"].get<double>();
    c.qos.tti_us = q["tti_us"].get<double>();
    c.qos.symbols_per_tti = q["symbols_per_tti"].get<int>();
    c.qos.scs_khz = q["scs_khz"].get<double>();
    c.slot_duration_us = q["slot_duration_us"].get<double>();
    c.processing_us = q["processing_us"].get<double>();
    c.shannon_gap_db = t["link"]["shannon_gap_db"].get<double>();
    c.overhead = t["link"]["overhead"].get<double>();
    c.reliability_sinr_mode = parse_sinr_mode(t["reliability_sinr_mode"].get<std::string>());
    c.capacity_averaging = parse_averaging(t["capacity_averaging"].get<std::string>());
    c.coupling.tolerance = t["coupling"]["tolerance"].get<double>();
    c.coupling.max_iterations = t["coupling"]["max_iterations"].get<int>();
    c.coupling.damping = t["coupling"]["damping"].get<double>();
    c.availability_threshold_pct = t["availability_threshold_pct"].get<double>();
    c.drops = t["drops"].get<int>();
    c.urllc_samples = t["urllc_samples"].get<int>();
    c.embb_users = t["embb_users"].get<int>();
    c.polygon_probe_users = t["polygon_probe_users"].get<int>();
    c.polygon_margin_m = t["polygon_margin_m"].get<double>();
    c.master_seed = t["master_seed"].get<std::uint64_t>();
    c.capacity_lo = t["capacity"]["lo"].get<double>();
    c.capacity_hi = t["capacity"]["hi"].get<double>();
    c.capacity_tol = t["capacity"]["tol"].get<double>();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return c;
}

void apply_override(json& tree, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override must look like key=value, got '" + std::string(assignment) + "'");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &tree;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("malformed override key '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    json& next = (*node)[part];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    node = &next;
    start = dot + 1;
  }
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json tree = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    tree = json::parse(ss.str(), nullptr, false);
    if (tree.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  }
  for (const auto& o : overrides) apply_override(tree, o);
  ScenarioConfig cfg = config_from_json(tree);
  validate(cfg);
  return cfg;
}

void validate(const ScenarioConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(c.frequency_ghz > 0.0, "frequency_ghz must be positive");
  require(c.bandwidth_mhz > 0.0, "bandwidth_mhz must be positive");
  require(c.isd_m > 0.0, "isd_m must be positive");
  require(c.near_bs_offset_m >= 0.0, "near_bs_offset_m must be >= 0");
  require(c.ue_height_m > 0.0 && c.ue_height_m < c.factory_height_m, "ue_height_m must lie inside the hall");
  require(c.wall_loss_db >= 0.0, "wall_loss_db must be >= 0");
  require(c.extra_isolation_db >= 0.0, "extra_isolation_db must be >= 0");
  require(c.indoor_loss_db_per_m >= 0.0, "indoor_loss_db_per_m must be >= 0");
  require(c.interf_beam_backoff_db.value_or(0.0) >= 0.0 && c.bs_to_bs_backoff_db >= 0.0, "beam backoffs must be >= 0");
  require(c.urllc_arrival_density >= 0.0, "traffic.urllc_arrival_density must be >= 0");
  require(c.embb_area_density_mbps_km2 >= 0.0, "traffic.embb_area_density_mbps_km2 must be >= 0");
  require(c.dl_share >= 0.0 && c.dl_share <= 1.0, "traffic.dl_share must lie in [0, 1]");
  require(c.qos.payload_bits > 0.0 && c.qos.tti_us > 0.0, "qos payload and tti must be positive");
  require(c.overhead >= 0.0 && c.overhead < 1.0, "link.overhead must lie in [0, 1)");
  require(c.shannon_gap_db >= 0.0, "link.shannon_gap_db must be >= 0");
  require(c.coupling.tolerance > 0.0 && c.coupling.max_iterations >= 1, "coupling tolerance/iterations invalid");
  require(c.coupling.damping >= 0.0 && c.coupling.damping < 1.0, "coupling.damping must lie in [0, 1)");
  require(c.availability_threshold_pct > 0.0 && c.availability_threshold_pct <= 100.0,
          "availability_threshold_pct must lie in (0, 100]");
  require(c.drops >= 1, "drops must be >= 1");
  require(c.urllc_samples >= 1, "urllc_samples must be >= 1");
  require(c.embb_users >= 1, "embb_users must be >= 1");
  require(c.polygon_probe_users >= 0, "polygon_probe_users must be >= 0");
  require(c.polygon_margin_m > 0.0, "polygon_margin_m must be positive");
  require(c.capacity_lo >= 0.0 && c.capacity_lo < c.capacity_hi, "capacity bracket must satisfy 0 <= lo < hi");
  require(c.capacity_tol > 0.0, "capacity.tol must be positive");
  for (const NetworkConfig* n : {&c.macro, &c.factory}) {
    require(n->pc_alpha >= 0.0 && n->pc_alpha <= 1.0, "pc_alpha must lie in [0, 1]");
    for (int k : n->array) require(k >= 1, "array factors must be >= 1");
  }
  if (c.acir_override_db) require(std::isfinite(*c.acir_override_db) && *c.acir_override_db >= 0.0,
                                  "acir_override_db must be finite and >= 0");

  TddPattern mp, fp;
  try {
    mp = c.macro_pattern();
    fp = c.factory_pattern();
    (void)parse_pattern(to_string(mp));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.sync_mode == SyncMode::Synchronized)
    require(to_string(mp) == to_string(fp), "synchronized TDD requires identical macro and factory patterns");
  if (c.sync_mode == SyncMode::Unsynchronized && c.macro.tdd_pattern == "auto" && c.factory.tdd_pattern == "auto")
    require(to_string(mp) != to_string(fp), "unsynchronized TDD with identical patterns");

  try {
    (void)build_layout(c.layout_params());
    (void)c.macro_array(0.0).array_gain_db();
    (void)c.factory_array(0.0).array_gain_db();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  const std::string s = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace coex
