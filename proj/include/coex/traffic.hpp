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
#include <functional>
#include <span>
#include <vector>

#include "coex/geometry.hpp"
#include "coex/tdd.hpp"

namespace coex {

struct OfferedLoad {
  double urllc_arrival_density = 5.0;    // packets/s/m^2, both directions together
  double embb_area_density = 100e6;      // bits/s/km^2, both directions together
  double dl_share = 0.5;                 // DL:UL 1:1
};

/// Per-cell quantity for each direction. Cells are the macro sectors followed
/// by the factory sectors.
struct DirectionalLoad {
  Eigen::ArrayXd downlink;
  Eigen::ArrayXd uplink;

  static DirectionalLoad zeros(Eigen::Index cells);
  Eigen::Index cells() const { return downlink.size(); }
  Eigen::ArrayXd& of(Direction d) { return d == Direction::Downlink ? downlink : uplink; }
  const Eigen::ArrayXd& of(Direction d) const { return d == Direction::Downlink ? downlink : uplink; }
};

/// Fraction of each direction's slot resources occupied, in [0, 1].
struct CellUtilization : DirectionalLoad {
  int iterations = 0;
  bool converged = true;
  std::vector<double> delta_history;
};

/// Offered bits/s per cell and direction. URLLC traffic is split over the
/// factory sectors in proportion to `factory_association_counts`.
DirectionalLoad offered_cell_load(const OfferedLoad& load, const NetworkLayout& layout, double payload_bits,
                                  std::span<const std::size_t> factory_association_counts);

struct CouplingParams {
  double tolerance = 1e-9;
  int max_iterations = 1000;
  double damping = 0.0;  // weight of the previous iterate
};

/// Cell capacity (bits/s, already scaled by the direction's slot fraction)
/// given the current utilization of every cell.
using CapacityFn = std::function<DirectionalLoad(const DirectionalLoad& utilization)>;

/// min(1, offered / capacity) element-wise; zero capacity saturates unless nothing is offered.
DirectionalLoad saturating_utilization(const DirectionalLoad& offered, const DirectionalLoad& capacity);

/// Fixed point u = min(1, offered / capacity(u)) by iteration from `initial`.
/// Entries of `pinned` that are not NaN hold their cell at that utilization.
CellUtilization solve_load_coupling(const DirectionalLoad& offered, const CapacityFn& capacity,
                                    const DirectionalLoad& initial, const CouplingParams& params = {},
                                    const DirectionalLoad* pinned = nullptr);

}  // namespace coex
