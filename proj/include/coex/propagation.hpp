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
#include <string>
#include <string_view>

#include "coex/geometry.hpp"

namespace coex {

// Large-scale loss models; coefficients follow 3GPP TR 38.901 Table 7.4.1-1.
enum class PathlossModel { UMa, UMi, InH_OpenOffice };

std::string to_string(PathlossModel m);
PathlossModel parse_pathloss_model(std::string_view s);

/// What to do with distances below a model's validity range.
enum class DistancePolicy { Clamp, Reject };

struct PathlossBreakdown {
  PathlossModel model = PathlossModel::UMa;
  bool los = false;
  double basic_pl = 0.0;
  double shadow = 0.0;
  double wall = 0.0;
  double indoor = 0.0;
  double total = 0.0;
};

/// Counts distance clamps so callers can report them once instead of per link.
struct ClampCounter {
  std::uint64_t clamped = 0;
};

double min_distance(PathlossModel model);

/// Basic path loss in dB for a 2D distance `d2d` and antenna heights.
/// Throws std::domain_error for invalid input or, under DistancePolicy::Reject,
/// for distances below the model minimum.
double basic_pathloss(PathlossModel model, double d2d, double h_bs, double h_ut, double fc_ghz, bool los,
                      DistancePolicy policy = DistancePolicy::Clamp, ClampCounter* clamps = nullptr);

double los_probability(PathlossModel model, double d2d, double h_ut);

double shadow_sigma_db(PathlossModel model, bool los);

/// Perpendicular loss plus an angular term that grows towards grazing incidence.
double wall_penetration_loss(double incident_angle_deg, double perp_loss_db, double angular_coeff_db);

enum class NodeKind { MacroBs, FactoryBs, EmbbUe, UrllcUe };

inline bool is_indoor(NodeKind k) { return k == NodeKind::FactoryBs || k == NodeKind::UrllcUe; }
inline bool is_bs(NodeKind k) { return k == NodeKind::MacroBs || k == NodeKind::FactoryBs; }

/// A propagation endpoint. Sectors of one site share the same `id`, so they
/// share LOS state and shadowing towards any other node.
struct Node {
  NodeKind kind = NodeKind::EmbbUe;
  std::uint64_t id = 0;
  Position pos;
};

enum class LinkClass {
  MacroToOutdoorUe,   // UMa
  FactoryToIndoorUe,  // InH open office
  MacroToIndoor,      // UMa + wall + indoor (indoor UE or factory BS)
  IndoorToOutdoorUe,  // UMi + wall + indoor (factory BS or indoor UE to eMBB UE)
};

/// Throws std::invalid_argument for pairs the coexistence model never evaluates.
LinkClass classify_link(NodeKind a, NodeKind b);

struct PropagationParams {
  double fc_ghz = 3.5;
  double wall_perp_db = 13.0;
  double wall_angular_coeff_db = 20.0;
  double indoor_db_per_m = 0.5;
  bool full_isolation = false;
  /// Base model of the macro BS <-> factory BS link.
  PathlossModel macro_factory_bs_model = PathlossModel::UMa;
  DistancePolicy distance_policy = DistancePolicy::Clamp;
  bool shadowing = true;
};

/// Deterministic per unordered node pair for a given seed.
PathlossBreakdown composite_pathloss(const NetworkLayout& layout, const Node& a, const Node& b,
                                     const PropagationParams& params, std::uint64_t seed,
                                     ClampCounter* clamps = nullptr);

}  // namespace coex
