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
#include "coex/traffic.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coex {

DirectionalLoad DirectionalLoad::zeros(Eigen::Index cells) {
  return {Eigen::ArrayXd::Zero(cells), Eigen::ArrayXd::Zero(cells)};
}

DirectionalLoad offered_cell_load(const OfferedLoad& load, const NetworkLayout& layout, double payload_bits,
                                  std::span<const std::size_t> factory_association_counts) {
  if (load.urllc_arrival_density < 0.0 || load.embb_area_density < 0.0)
    throw std::invalid_argument("offered densities must be >= 0");
  if (load.dl_share < 0.0 || load.dl_share > 1.0) throw std::invalid_argument("dl_share must lie in [0, 1]");

  const auto n_macro = static_cast<Eigen::Index>(layout.n_sectors());
  const auto n_fac = static_cast<Eigen::Index>(factory_association_counts.size());
  DirectionalLoad out = DirectionalLoad::zeros(n_macro + n_fac);

  const double sector_km2 = layout.sector_area() * 1e-6;
  const double macro_total = load.embb_area_density * sector_km2;
  out.downlink.head(n_macro).setConstant(macro_total * load.dl_share);
  out.uplink.head(n_macro).setConstant(macro_total * (1.0 - load.dl_share));

  if (n_fac > 0) {
    const double area = layout.factory.width * layout.factory.depth;
    const double fac_total = load.urllc_arrival_density * area * payload_bits;
    const std::size_t n_assoc =
        std::accumulate(factory_association_counts.begin(), factory_association_counts.end(), std::size_t{0});
    for (Eigen::Index s = 0; s < n_fac; ++s) {
      const double share = n_assoc > 0 ? static_cast<double>(factory_association_counts[static_cast<std::size_t>(s)]) /
                                             static_cast<double>(n_assoc)
                                       : 1.0 / static_cast<double>(n_fac);
      out.downlink[n_macro + s] = fac_total * load.dl_share * share;
      out.uplink[n_macro + s] = fac_total * (1.0 - load.dl_share) * share;
    }
  }
  return out;
}

DirectionalLoad saturating_utilization(const DirectionalLoad& offered, const DirectionalLoad& capacity) {
  DirectionalLoad u = DirectionalLoad::zeros(offered.cells());
  for (Direction d : {Direction::Downlink, Direction::Uplink}) {
    const auto& o = offered.of(d);
    const auto& c = capacity.of(d);
    auto& out = u.of(d);
    for (Eigen::Index k = 0; k < o.size(); ++k) {
      if (o[k] <= 0.0)
        out[k] = 0.0;
      else if (c[k] <= 0.0)
        out[k] = 1.0;
      else
        out[k] = std::min(1.0, o[k] / c[k]);
    }
  }
  return u;
}

CellUtilization solve_load_coupling(const DirectionalLoad& offered, const CapacityFn& capacity,
                                    const DirectionalLoad& initial, const CouplingParams& params,
                                    const DirectionalLoad* pinned) {
  if (!offered.downlink.allFinite() || !offered.uplink.allFinite())
    throw std::invalid_argument("offered loads must be finite");
  if (params.damping < 0.0 || params.damping >= 1.0) throw std::invalid_argument("damping must lie in [0, 1)");

  auto apply_pins = [&](DirectionalLoad& u) {
    if (!pinned) return;
    for (Direction d : {Direction::Downlink, Direction::Uplink})
      for (Eigen::Index k = 0; k < u.cells(); ++k)
        if (!std::isnan(pinned->of(d)[k])) u.of(d)[k] = pinned->of(d)[k];
  };

  CellUtilization result;
  if (offered.cells() == 0) return result;
  DirectionalLoad u = initial;
  u.downlink = u.downlink.max(0.0).min(1.0);
  u.uplink = u.uplink.max(0.0).min(1.0);
  apply_pins(u);
  result.converged = false;
  for (int it = 1; it <= params.max_iterations; ++it) {
    DirectionalLoad next = saturating_utilization(offered, capacity(u));
    if (params.damping > 0.0) {
      next.downlink = params.damping * u.downlink + (1.0 - params.damping) * next.downlink;
      next.uplink = params.damping * u.uplink + (1.0 - params.damping) * next.uplink;
    }
    apply_pins(next);
    const double delta = std::max((next.downlink - u.downlink).abs().maxCoeff(),
                                  (next.uplink - u.uplink).abs().maxCoeff());
    u = std::move(next);
    result.iterations = it;
    result.delta_history.push_back(delta);
    if (delta <= params.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.downlink = std::move(u.downlink);
  result.uplink = std::move(u.uplink);
  return result;
}

}  // namespace coex
