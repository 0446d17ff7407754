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
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coex/rng.hpp"

namespace coex {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

enum class Placement { CellEdge, Center, NearBS };

std::string to_string(Placement p);
Placement parse_placement(std::string_view s);

struct Rect {
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Zero();
};

/// A point on the floor plan with an antenna height above ground.
struct Position {
  Vec2 xy = Vec2::Zero();
  double height = 0.0;

  Vec3 xyz() const { return {xy.x(), xy.y(), height}; }
};

struct Site {
  Vec2 position = Vec2::Zero();
  double height = 25.0;
  std::array<double, 3> sector_azimuth_deg{0.0, 120.0, 240.0};
};

/// Axis-aligned factory hall with a single tri-sectored ceiling site at its centroid.
struct FactoryBox {
  Vec2 origin = Vec2::Zero();  // south-west floor corner
  double width = 100.0;        // along x
  double depth = 100.0;        // along y
  double height = 10.0;
  Vec2 bs_position = Vec2::Zero();
  double bs_height = 8.0;
  std::array<double, 3> bs_azimuth_deg{0.0, 120.0, 240.0};
  double downtilt_deg = 10.0;
  Placement placement = Placement::Center;

  Vec2 centroid() const { return origin + Vec2(width / 2.0, depth / 2.0); }
  double diagonal() const;
  /// Closed rectangle test: points on a wall count as indoor.
  bool contains(const Vec2& p) const;
  bool strictly_contains(const Vec2& p) const;
  /// Euclidean distance from p to the rectangle (0 inside).
  double distance_to(const Vec2& p) const;
};

struct LayoutParams {
  double isd = 500.0;
  double macro_height = 25.0;
  double factory_width = 100.0;
  double factory_depth = 100.0;
  double factory_height = 10.0;
  double factory_bs_height = 8.0;
  double factory_downtilt_deg = 10.0;
  Placement placement = Placement::Center;
  /// NearBS: clearance between the macro site and the nearest factory wall,
  /// measured along the sector boresight.
  double near_bs_offset = 30.0;
};

struct NetworkLayout {
  std::vector<Site> sites;
  double isd = 500.0;
  std::vector<Vec2> wrap_vectors;  // identity first, then the 6 cluster shifts
  FactoryBox factory;
  Rect bounds;

  std::size_t n_sectors() const { return sites.size() * 3; }
  double site_cell_area() const;   // hexagon area per site
  double sector_area() const { return site_cell_area() / 3.0; }

  /// Translated copy of p (over all wrap vectors) closest to ref.
  Vec2 image_near(const Vec2& p, const Vec2& ref) const;
  /// Indoor test honouring wrap-around.
  bool is_indoor(const Vec2& p) const;
  /// Index of the macro site whose hexagonal cell contains p (wrapped).
  std::size_t nearest_site(const Vec2& p) const;
};

NetworkLayout build_layout(const LayoutParams& params);

struct UserDrop {
  std::vector<Position> urllc_users;
  std::vector<Position> embb_users;
};

/// Uniform URLLC points strictly inside the factory and uniform eMBB points over
/// the 7-site cluster, rejected while they fall inside the factory.
UserDrop drop_users(const NetworkLayout& layout, std::size_t n_urllc, std::size_t n_embb, Rng& rng,
                    double ue_height = 1.5);

/// Uniform outdoor points within `margin` metres of the factory walls.
std::vector<Position> drop_ring_users(const NetworkLayout& layout, std::size_t n, double margin, Rng& rng,
                                      double ue_height = 1.5);

double wrapped_distance(const NetworkLayout& layout, const Vec2& a, const Vec2& b);
double wrapped_distance(const NetworkLayout& layout, const Position& a, const Position& b);

struct WallCrossing {
  double incident_angle_deg = 0.0;
  double indoor_distance = 0.0;
  Vec2 crossing = Vec2::Zero();
};

/// Entry point of the straight outdoor->indoor ray through the factory wall.
/// Throws std::invalid_argument unless exactly one endpoint is indoor.
WallCrossing wall_crossing(const NetworkLayout& layout, const Vec2& outdoor_pt, const Vec2& indoor_pt);

nlohmann::json layout_to_json(const NetworkLayout& layout);

double uniform01(Rng& rng);

}  // namespace coex
