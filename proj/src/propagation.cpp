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
#include "coex/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coex/rng.hpp"
#include "coex/units.hpp"

namespace coex {

std::string to_string(PathlossModel m) {
  switch (m) {
    case PathlossModel::UMa: return "uma";
    case PathlossModel::UMi: return "umi";
    case PathlossModel::InH_OpenOffice: return "inh_open_office";
  }
  return "?";
}

PathlossModel parse_pathloss_model(std::string_view s) {
  if (s == "uma") return PathlossModel::UMa;
  if (s == "umi") return PathlossModel::UMi;
  if (s == "inh_open_office") return PathlossModel::InH_OpenOffice;
  throw std::invalid_argument("unknown path loss model '" + std::string(s) + "'");
}

double min_distance(PathlossModel model) {
  return model == PathlossModel::InH_OpenOffice ? 1.0 : 10.0;
}

namespace {

double breakpoint(double h_bs, double h_ut, double fc_ghz) {
  // Effective heights with a 1 m environment height.
  const double hb = h_bs - 1.0;
  const double hu = h_ut - 1.0;
  return 4.0 * hb * hu * fc_ghz * 1e9 / kSpeedOfLight;
}

double uma_los(double d2d, double d3d, double h_bs, double h_ut, double fc) {
  const double dbp = breakpoint(h_bs, h_ut, fc);
  if (d2d <= dbp) return 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc);
  const double dh = h_bs - h_ut;
  return 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) - 9.0 * std::log10(dbp * dbp + dh * dh);
}

double umi_los(double d2d, double d3d, double h_bs, double h_ut, double fc) {
  const double dbp = breakpoint(h_bs, h_ut, fc);
  if (d2d <= dbp) return 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(fc);
  const double dh = h_bs - h_ut;
  return 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) - 9.5 * std::log10(dbp * dbp + dh * dh);
}

}  // namespace

double basic_pathloss(PathlossModel model, double d2d, double h_bs, double h_ut, double fc_ghz, bool los,
                      DistancePolicy policy, ClampCounter* clamps) {
  if (!(fc_ghz > 0.0)) throw std::domain_error("carrier frequency must be positive");
  if (!(d2d >= 0.0) || !std::isfinite(d2d)) throw std::domain_error("distance must be finite and >= 0");
  const double dmin = min_distance(model);
  const double dh = h_bs - h_ut;
  double d3d = std::hypot(d2d, dh);
  const double dist_checked = model == PathlossModel::InH_OpenOffice ? d3d : d2d;
  if (dist_checked < dmin) {
    if (policy == DistancePolicy::Reject)
      throw std::domain_error("distance below the validity range of " + to_string(model));
    if (clamps) ++clamps->clamped;
    if (model == PathlossModel::InH_OpenOffice) {
      d3d = dmin;
    } else {
      d2d = dmin;
      d3d = std::hypot(d2d, dh);
    }
  }

  const double lf = std::log10(fc_ghz);
  switch (model) {
    case PathlossModel::UMa: {
      const double pl_los = uma_los(d2d, d3d, h_bs, h_ut, fc_ghz);
      if (los) return pl_los;
      const double pl_nlos = 13.54 + 39.08 * std::log10(d3d) + 20.0 * lf - 0.6 * (h_ut - 1.5);
      return std::max(pl_los, pl_nlos);
    }
    case PathlossModel::UMi: {
      const double pl_los = umi_los(d2d, d3d, h_bs, h_ut, fc_ghz);
      if (los) return pl_los;
      const double pl_nlos = 35.3 * std::log10(d3d) + 22.4 + 21.3 * lf - 0.3 * (h_ut - 1.5);
      return std::max(pl_los, pl_nlos);
    }
    case PathlossModel::InH_OpenOffice: {
      const double pl_los = 32.4 + 17.3 * std::log10(d3d) + 20.0 * lf;
      if (los) return pl_los;
      const double pl_nlos = 38.3 * std::log10(d3d) + 17.30 + 24.9 * lf;
      return std::max(pl_los, pl_nlos);
    }
  }
  throw std::invalid_argument("unknown path loss model");
}

double los_probability(PathlossModel model, double d2d, double h_ut) {
  switch (model) {
    case PathlossModel::UMa: {
      if (d2d <= 18.0) return 1.0;
      const double c = h_ut <= 13.0 ? 0.0 : std::pow((h_ut - 13.0) / 10.0, 1.5);
      const double base = 18.0 / d2d + std::exp(-d2d / 63.0) * (1.0 - 18.0 / d2d);
      const double boost = 1.0 + c * 5.0 / 4.0 * std::pow(d2d / 100.0, 3) * std::exp(-d2d / 150.0);
      return std::clamp(base * boost, 0.0, 1.0);
    }
    case PathlossModel::UMi:
      if (d2d <= 18.0) return 1.0;
      return 18.0 / d2d + std::exp(-d2d / 36.0) * (1.0 - 18.0 / d2d);
    case PathlossModel::InH_OpenOffice:
      if (d2d <= 5.0) return 1.0;
      if (d2d <= 49.0) return std::exp(-(d2d - 5.0) / 70.8);
      return std::exp(-(d2d - 49.0) / 211.7) * 0.54;
  }
  return 0.0;
}

double shadow_sigma_db(PathlossModel model, bool los) {
  switch (model) {
    case PathlossModel::UMa: return los ? 4.0 : 6.0;
    case PathlossModel::UMi: return los ? 4.0 : 7.82;
    case PathlossModel::InH_OpenOffice: return los ? 3.0 : 8.03;
  }
  return 0.0;
}

double wall_penetration_loss(double incident_angle_deg, double perp_loss_db, double angular_coeff_db) {
  const double g = 1.0 - std::cos(deg2rad(incident_angle_deg));
  return perp_loss_db + angular_coeff_db * g * g;
}

LinkClass classify_link(NodeKind a, NodeKind b) {
  auto is = [&](NodeKind x, NodeKind y) { return (a == x && b == y) || (a == y && b == x); };
  if (is(NodeKind::MacroBs, NodeKind::EmbbUe)) return LinkClass::MacroToOutdoorUe;
  if (is(NodeKind::FactoryBs, NodeKind::UrllcUe)) return LinkClass::FactoryToIndoorUe;
  if (is(NodeKind::MacroBs, NodeKind::UrllcUe) || is(NodeKind::MacroBs, NodeKind::FactoryBs))
    return LinkClass::MacroToIndoor;
  if (is(NodeKind::FactoryBs, NodeKind::EmbbUe) || is(NodeKind::UrllcUe, NodeKind::EmbbUe))
    return LinkClass::IndoorToOutdoorUe;
  throw std::invalid_argument("composite_pathloss: no propagation rule for this node pair");
}

PathlossBreakdown composite_pathloss(const NetworkLayout& layout, const Node& a, const Node& b,
                                     const PropagationParams& params, std::uint64_t seed,
                                     ClampCounter* clamps) {
  const LinkClass cls = classify_link(a.kind, b.kind);
  PathlossBreakdown pb;

  double d2d = wrapped_distance(layout, a.pos.xy, b.pos.xy);
  double d2d_los = d2d;
  double h_bs = 0.0;
  double h_ut = 0.0;
  bool crosses_wall = false;

  switch (cls) {
    case LinkClass::MacroToOutdoorUe:
      pb.model = PathlossModel::UMa;
      h_bs = a.kind == NodeKind::MacroBs ? a.pos.height : b.pos.height;
      h_ut = a.kind == NodeKind::MacroBs ? b.pos.height : a.pos.height;
      break;
    case LinkClass::FactoryToIndoorUe:
      pb.model = PathlossModel::InH_OpenOffice;
      h_bs = a.kind == NodeKind::FactoryBs ? a.pos.height : b.pos.height;
      h_ut = a.kind == NodeKind::FactoryBs ? b.pos.height : a.pos.height;
      break;
    case LinkClass::MacroToIndoor: {
      const bool bs_to_bs = is_bs(a.kind) && is_bs(b.kind);
      pb.model = bs_to_bs ? params.macro_factory_bs_model : PathlossModel::UMa;
      h_bs = a.kind == NodeKind::MacroBs ? a.pos.height : b.pos.height;
      h_ut = a.kind == NodeKind::MacroBs ? b.pos.height : a.pos.height;
      crosses_wall = true;
      break;
    }
    case LinkClass::IndoorToOutdoorUe:
      pb.model = PathlossModel::UMi;
      h_bs = std::max(a.pos.height, b.pos.height);
      h_ut = std::min(a.pos.height, b.pos.height);
      crosses_wall = true;
      break;
  }

  if (crosses_wall) {
    const Node& out = is_indoor(a.kind) ? b : a;
    const Node& in = is_indoor(a.kind) ? a : b;
    const WallCrossing wc = wall_crossing(layout, out.pos.xy, in.pos.xy);
    pb.wall = params.full_isolation
                  ? kInf
                  : wall_penetration_loss(wc.incident_angle_deg, params.wall_perp_db,
                                          params.wall_angular_coeff_db);
    pb.indoor = params.indoor_db_per_m * wc.indoor_distance;
    d2d_los = std::max(0.0, d2d - wc.indoor_distance);
  }

  const std::uint64_t lo = std::min(a.id, b.id);
  const std::uint64_t hi = std::max(a.id, b.id);
  const double p_los = los_probability(pb.model, d2d_los, h_ut);
  pb.los = hash_uniform(hash_of({seed, static_cast<std::uint64_t>(Stream::LosState), lo, hi})) < p_los;
  pb.basic_pl = basic_pathloss(pb.model, d2d, h_bs, h_ut, params.fc_ghz, pb.los, params.distance_policy, clamps);
  if (params.shadowing)
    pb.shadow = shadow_sigma_db(pb.model, pb.los) *
                hash_normal(hash_of({seed, static_cast<std::uint64_t>(Stream::Shadowing), lo, hi}));
  pb.total = pb.basic_pl + pb.shadow + pb.wall + pb.indoor;
  return pb;
}

}  // namespace coex
