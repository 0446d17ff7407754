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
#include "coex/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coex/units.hpp"

namespace coex {

double ArrayConfig::array_gain_db() const {
  const int n = total_elements();
  if (n < 1) throw std::invalid_argument("antenna array needs at least one element");
  return 10.0 * std::log10(static_cast<double>(n));
}

double element_gain(double az_offset_deg, double el_offset_deg, const ArrayConfig& cfg) {
  const double az = wrap_deg(az_offset_deg);
  const double a_h = std::min(12.0 * std::pow(az / cfg.hpbw_h_deg, 2), cfg.front_back_db);
  const double a_v = std::min(12.0 * std::pow(el_offset_deg / cfg.hpbw_v_deg, 2), cfg.sla_v_db);
  return cfg.max_element_gain_dbi - std::min(a_h + a_v, cfg.front_back_db);
}

double bs_gain_towards(const ArrayConfig& cfg, const Vec3& from, const Vec3& to, LinkRole role,
                       double backoff_db) {
  const Vec3 d = to - from;
  const double horiz = std::hypot(d.x(), d.y());
  const double az = rad2deg(std::atan2(d.y(), d.x())) - cfg.azimuth_deg;
  // Elevation positive upwards; a downtilted boresight points at -downtilt.
  const double el = rad2deg(std::atan2(d.z(), horiz)) + cfg.downtilt_deg;
  double g = element_gain(az, el, cfg) + cfg.array_gain_db();
  if (role == LinkRole::Interfering) g -= backoff_db;
  return g;
}

double link_antenna_gain(const std::optional<ArrayConfig>& tx_cfg, const Vec3& tx,
                         const std::optional<ArrayConfig>& rx_cfg, const Vec3& rx, LinkRole role,
                         double backoff_db) {
  double g = 0.0;
  if (tx_cfg) g += bs_gain_towards(*tx_cfg, tx, rx, LinkRole::Serving);
  if (rx_cfg) g += bs_gain_towards(*rx_cfg, rx, tx, LinkRole::Serving);
  // UE ends are isotropic; the backoff applies once per link.
  if (role == LinkRole::Interfering && (tx_cfg || rx_cfg)) g -= backoff_db;
  return g;
}

}  // namespace coex
