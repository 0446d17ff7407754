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
#include "coex/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coex/units.hpp"

namespace coex {

namespace {

Vec2 unit(double az_deg) { return {std::cos(deg2rad(az_deg)), std::sin(deg2rad(az_deg))}; }

// Hexagon of a site: apothem isd/2 towards the 6 neighbours (30 + 60k degrees).
bool in_hexagon(const Vec2& rel, double isd) {
  const double apothem = isd / 2.0;
  for (int k = 0; k < 6; ++k)
    if (rel.dot(unit(30.0 + 60.0 * k)) > apothem) return false;
  return true;
}

}  // namespace

std::string to_string(Placement p) {
  switch (p) {
    case Placement::CellEdge: return "cell_edge";
    case Placement::Center: return "center";
    case Placement::NearBS: return "near_bs";
  }
  return "?";
}

Placement parse_placement(std::string_view s) {
  if (s == "cell_edge") return Placement::CellEdge;
  if (s == "center") return Placement::Center;
  if (s == "near_bs") return Placement::NearBS;
  throw std::invalid_argument("unknown placement '" + std::string(s) + "'");
}

double FactoryBox::diagonal() const { return std::hypot(width, depth); }

bool FactoryBox::contains(const Vec2& p) const {
  return p.x() >= origin.x() && p.x() <= origin.x() + width && p.y() >= origin.y() &&
         p.y() <= origin.y() + depth;
}

bool FactoryBox::strictly_contains(const Vec2& p) const {
  return p.x() > origin.x() && p.x() < origin.x() + width && p.y() > origin.y() &&
         p.y() < origin.y() + depth;
}

double FactoryBox::distance_to(const Vec2& p) const {
  const double dx = std::max({origin.x() - p.x(), 0.0, p.x() - (origin.x() + width)});
  const double dy = std::max({origin.y() - p.y(), 0.0, p.y() - (origin.y() + depth)});
  return std::hypot(dx, dy);
}

double NetworkLayout::site_cell_area() const { return std::sqrt(3.0) / 2.0 * isd * isd; }

Vec2 NetworkLayout::image_near(const Vec2& p, const Vec2& ref) const {
  Vec2 best = p;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& t : wrap_vectors) {
    const Vec2 q = p + t;
    const double d = (q - ref).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

bool NetworkLayout::is_indoor(const Vec2& p) const {
  return factory.contains(image_near(p, factory.centroid()));
}

std::size_t NetworkLayout::nearest_site(const Vec2& p) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sites.size(); ++s) {
    const double d = wrapped_distance(*this, p, sites[s].position);
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

NetworkLayout build_layout(const LayoutParams& params) {
  if (!(params.isd > 0.0)) throw std::invalid_argument("isd must be positive");
  if (!(params.factory_width > 0.0 && params.factory_depth > 0.0 && params.factory_height > 0.0))
    throw std::invalid_argument("factory dimensions must be positive");

  NetworkLayout layout;
  layout.isd = params.isd;
  const double isd = params.isd;

  Site centre;
  centre.height = params.macro_height;
  layout.sites.push_back(centre);
  for (int k = 0; k < 6; ++k) {
    Site s;
    s.position = isd * unit(30.0 + 60.0 * k);
    s.height = params.macro_height;
    layout.sites.push_back(s);
  }

  // 7-cell cluster shifts: (2, 1) lattice step, length sqrt(7) * isd.
  layout.wrap_vectors.push_back(Vec2::Zero());
  const Vec2 t0 = isd * (2.0 * unit(30.0) + unit(90.0));
  for (int k = 0; k < 6; ++k) {
    const Eigen::Rotation2Dd rot(deg2rad(60.0 * k));
    layout.wrap_vectors.push_back(rot * t0);
  }

  const double circumradius = isd / std::sqrt(3.0);
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const auto& s : layout.sites)
    for (int k = 0; k < 6; ++k) {
      const Vec2 v = s.position + circumradius * unit(60.0 * k);
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  layout.bounds = {lo, hi};

  if (params.factory_width * params.factory_depth > layout.site_cell_area())
    throw std::invalid_argument("factory floor larger than the inter-site cell area");

  FactoryBox& f = layout.factory;
  f.width = params.factory_width;
  f.depth = params.factory_depth;
  f.height = params.factory_height;
  f.bs_height = params.factory_bs_height;
  f.downtilt_deg = params.factory_downtilt_deg;
  f.placement = params.placement;
  if (f.bs_height <= 0.0 || f.bs_height > f.height)
    throw std::invalid_argument("factory BS height must lie within the hall height");

  Vec2 c;
  switch (params.placement) {
    case Placement::NearBS: {
      const double az = layout.sites[0].sector_azimuth_deg[0];
      c = layout.sites[0].position + (params.near_bs_offset + f.width / 2.0) * unit(az);
      break;
    }
    case Placement::Center:
      // Voronoi vertex shared by sites 0, 1 and 6: maximal distance to every site.
      c = circumradius * unit(0.0);
      break;
    case Placement::CellEdge:
      // Midpoint of the border between sites 0 and 1.
      c = 0.5 * (layout.sites[0].position + layout.sites[1].position);
      break;
  }
  f.origin = c - Vec2(f.width / 2.0, f.depth / 2.0);
  f.bs_position = c;

  for (const auto& s : layout.sites)
    if (layout.is_indoor(s.position))
      throw std::invalid_argument("factory floor contains a macro site; increase near_bs_offset");
  return layout;
}

double uniform01(Rng& rng) { return hash_uniform(rng()); }

UserDrop drop_users(const NetworkLayout& layout, std::size_t n_urllc, std::size_t n_embb, Rng& rng,
                    double ue_height) {
  UserDrop drop;
  const FactoryBox& f = layout.factory;
  drop.urllc_users.reserve(n_urllc);
  for (std::size_t i = 0; i < n_urllc; ++i) {
    const double ux = uniform01(rng);
    const double uy = uniform01(rng);
    const Vec2 p = f.origin + Vec2(ux * f.width, uy * f.depth);
    drop.urllc_users.push_back({p, ue_height});
  }

  const double R = layout.isd / std::sqrt(3.0);
  const double a = layout.isd / 2.0;
  drop.embb_users.reserve(n_embb);
  while (drop.embb_users.size() < n_embb) {
    const auto s = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(layout.sites.size()));
    const double ux = uniform01(rng);
    const double uy = uniform01(rng);
    const Vec2 rel((2.0 * ux - 1.0) * R, (2.0 * uy - 1.0) * a);
    if (!in_hexagon(rel, layout.isd)) continue;
    const Vec2 p = layout.sites[s].position + rel;
    if (layout.is_indoor(p)) continue;
    drop.embb_users.push_back({p, ue_height});
  }
  return drop;
}

std::vector<Position> drop_ring_users(const NetworkLayout& layout, std::size_t n, double margin, Rng& rng,
                                      double ue_height) {
  std::vector<Position> out;
  if (n == 0) return out;
  if (!(margin > 0.0)) throw std::invalid_argument("ring margin must be positive");
  const FactoryBox& f = layout.factory;
  const Vec2 lo = f.origin - Vec2::Constant(margin);
  const Vec2 span(f.width + 2.0 * margin, f.depth + 2.0 * margin);
  out.reserve(n);
  while (out.size() < n) {
    const double ux = uniform01(rng);
    const double uy = uniform01(rng);
    const Vec2 p = lo + Vec2(ux * span.x(), uy * span.y());
    if (f.contains(p) || f.distance_to(p) > margin) continue;
    out.push_back({p, ue_height});
  }
  return out;
}

double wrapped_distance(const NetworkLayout& layout, const Vec2& a, const Vec2& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : layout.wrap_vectors) best = std::min(best, (a + t - b).norm());
  return best;
}

double wrapped_distance(const NetworkLayout& layout, const Position& a, const Position& b) {
  const double d2 = wrapped_distance(layout, a.xy, b.xy);
  return std::hypot(d2, a.height - b.height);
}

WallCrossing wall_crossing(const NetworkLayout& layout, const Vec2& outdoor_pt, const Vec2& indoor_pt) {
  const bool out_in = layout.is_indoor(outdoor_pt);
  const bool in_in = layout.is_indoor(indoor_pt);
  if (out_in == in_in)
    throw std::invalid_argument(in_in ? "wall_crossing: both endpoints indoor"
                                      : "wall_crossing: both endpoints outdoor");
  const FactoryBox& f = layout.factory;
  const Vec2 in = layout.image_near(indoor_pt, f.centroid());
  const Vec2 out = layout.image_near(outdoor_pt, in);
  const Vec2 d = in - out;
  const Vec2 lo = f.origin;
  const Vec2 hi = f.origin + Vec2(f.width, f.depth);

  // Slab entry parameters; the slab entered last is the crossed wall.
  double t_enter = -std::numeric_limits<double>::infinity();
  int axis = -1;
  for (int k = 0; k < 2; ++k) {
    if (d[k] == 0.0) continue;
    const double t1 = (lo[k] - out[k]) / d[k];
    const double t2 = (hi[k] - out[k]) / d[k];
    const double tk = std::min(t1, t2);
    if (tk > t_enter) {
      t_enter = tk;
      axis = k;
    }
  }
  WallCrossing wc;
  t_enter = std::clamp(t_enter, 0.0, 1.0);
  wc.crossing = out + t_enter * d;
  wc.indoor_distance = (in - wc.crossing).norm();
  const double cos_inc = std::abs(d[axis]) / d.norm();
  wc.incident_angle_deg = rad2deg(std::acos(std::clamp(cos_inc, 0.0, 1.0)));
  return wc;
}

nlohmann::json layout_to_json(const NetworkLayout& layout) {
  using nlohmann::json;
  json j;
  j["isd_m"] = layout.isd;
  json sites = json::array();
  for (const auto& s : layout.sites)
    sites.push_back({{"x", s.position.x()},
                     {"y", s.position.y()},
                     {"height_m", s.height},
                     {"sector_azimuth_deg", s.sector_azimuth_deg}});
  j["sites"] = sites;
  json wraps = json::array();
  for (const auto& t : layout.wrap_vectors) wraps.push_back({t.x(), t.y()});
  j["wrap_vectors"] = wraps;
  const FactoryBox& f = layout.factory;
  j["factory"] = {{"placement", to_string(f.placement)},
                  {"origin", {f.origin.x(), f.origin.y()}},
                  {"centroid", {f.centroid().x(), f.centroid().y()}},
                  {"width_m", f.width},
                  {"depth_m", f.depth},
                  {"height_m", f.height},
                  {"bs_height_m", f.bs_height},
                  {"bs_azimuth_deg", f.bs_azimuth_deg},
                  {"downtilt_deg", f.downtilt_deg}};
  j["bounds"] = {{"lo", {layout.bounds.lo.x(), layout.bounds.lo.y()}},
                 {"hi", {layout.bounds.hi.x(), layout.bounds.hi.y()}}};
  return j;
}

}  // namespace coex
