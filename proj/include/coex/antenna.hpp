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

#include <optional>

#include "coex/geometry.hpp"

namespace coex {

/// Panel described as V x H x (Vs x Hs x Ps). Every factor counts radiating
/// elements, so the steerable array gain is 10 log10 of their product.
struct ArrayConfig {
  int v = 1;
  int h = 1;
  int vs = 1;
  int hs = 1;
  int ps = 1;
  double max_element_gain_dbi = 8.0;
  double downtilt_deg = 0.0;
  double azimuth_deg = 0.0;
  double hpbw_h_deg = 65.0;
  double hpbw_v_deg = 65.0;
  double sla_v_db = 30.0;
  double front_back_db = 30.0;

  int total_elements() const { return v * h * vs * hs * ps; }
  double array_gain_db() const;
};

/// 3GPP sectorised element pattern. `az_offset` and `el_offset` are measured
/// from the (tilted) boresight, in degrees.
double element_gain(double az_offset_deg, double el_offset_deg, const ArrayConfig& cfg);

enum class LinkRole { Serving, Interfering };

/// Gain of a BS panel located at `from` towards `to`. Interfering links are
/// reduced by `backoff_db`.
double bs_gain_towards(const ArrayConfig& cfg, const Vec3& from, const Vec3& to, LinkRole role,
                       double backoff_db = 0.0);

/// Total antenna gain of a link. A missing config denotes an isotropic 0 dBi UE.
/// `rx` is expected to be the image of the receiver nearest to `tx`. Interfering
/// links lose `backoff_db` once, whatever the number of BS ends.
double link_antenna_gain(const std::optional<ArrayConfig>& tx_cfg, const Vec3& tx,
                         const std::optional<ArrayConfig>& rx_cfg, const Vec3& rx, LinkRole role,
                         double backoff_db = 0.0);

}  // namespace coex
