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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "coex/geometry.hpp"
#include "coex/tdd.hpp"

namespace coex {

struct AvailabilityResult {
  Direction direction = Direction::Downlink;
  std::size_t samples = 0;
  std::size_t successes = 0;
  double availability = 0.0;  // percent
  double ci95_binomial = 0.0; // percent, normal approximation
};

/// SA = 100 * sum(x_i) / N. Throws std::invalid_argument on empty input.
AvailabilityResult service_availability(std::span<const std::uint8_t> indicators,
                                        Direction direction = Direction::Downlink);

struct CapacityResult {
  Direction direction = Direction::Downlink;
  double capacity = 0.0;  // packets/s/m^2
  double lo = 0.0;
  double hi = 0.0;
  int evaluations = 0;
  bool unsaturated = false;        // availability target met at the upper bracket
  bool infeasible_at_lo = false;   // availability target missed at the lower bracket
  bool non_monotone = false;
};

struct CapacitySearch {
  double lo = 0.0;
  double hi = 400.0;
  double tol = 0.25;
  /// Availability that counts as "served", percent. 100 is the strict reading.
  double target = 100.0;
};

/// Largest arrival rate in [lo, hi] (within tol) meeting the availability
/// target, by bisection. Evaluator calls are sequential.
CapacityResult system_capacity(const std::function<double(double)>& evaluator, const CapacitySearch& search,
                               Direction direction = Direction::Downlink);

/// Upper bound on evaluations of `system_capacity`: both bracket ends plus
/// ceil(log2((hi - lo) / tol)) bisection steps.
int max_capacity_evaluations(const CapacitySearch& search);

/// Rate record of one eMBB user in one drop.
struct EmbbUserRate {
  Vec2 xy = Vec2::Zero();
  int serving_cell = -1;
  double dl_rate = 0.0;
  double ul_rate = 0.0;
};

enum class RateRegion { PolygonAroundFactory, ClosestMacroSectorUplink };

struct RateStats {
  double mean = 0.0;
  std::size_t users = 0;
  bool empty = true;
};

/// Closest macro sector to the factory: nearest site, sector whose boresight
/// is best aligned with the factory centroid.
int closest_macro_sector(const NetworkLayout& layout);

/// Mean DL rate of users within `margin` of the factory walls, or mean UL rate
/// of users served by the closest macro sector.
RateStats embb_rate_stats(std::span<const EmbbUserRate> users, const NetworkLayout& layout, RateRegion region,
                          double margin = 15.0);

/// 100 * (value - baseline) / baseline. Throws for baseline <= 0.
double relative_metric(double value, double baseline);

struct MeanCi {
  double mean = 0.0;
  double ci95 = 0.0;  // half-width from sample variation
  std::size_t n = 0;
};

/// Mean and 95% half-width (normal approximation) of per-drop values, summed in order.
MeanCi mean_ci95(std::span<const double> values);

}  // namespace coex
