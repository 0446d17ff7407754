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
#include "coex/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coex/units.hpp"

namespace coex {

double noise_power(double bandwidth_hz, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

PowerControlParams PowerControlParams::from_noise(double alpha, double target_snr_db, double p_max_dbm,
                                                  double bs_noise_dbm) {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("power control alpha must lie in [0, 1]");
  if (!std::isfinite(p_max_dbm)) throw std::invalid_argument("p_max must be finite");
  return {alpha, target_snr_db, p_max_dbm, bs_noise_dbm + target_snr_db};
}

double uplink_tx_power(double pl_total_db, const PowerControlParams& pc) {
  return std::min(pc.p_max_dbm, pc.p0_dbm + pc.alpha * pl_total_db);
}

double combine_acir(double aclr_db, double acs_db) {
  if (!(aclr_db > 0.0 && acs_db > 0.0)) throw std::invalid_argument("ACLR and ACS must be positive");
  return -10.0 * std::log10(std::pow(10.0, -aclr_db / 10.0) + std::pow(10.0, -acs_db / 10.0));
}

double scenario_acir(InterferenceScenario s, const AcirParams& p) {
  switch (s) {
    case InterferenceScenario::DlToDl: return combine_acir(p.aclr_bs, p.acs_ue);
    case InterferenceScenario::DlToUl: return combine_acir(p.aclr_bs, p.acs_bs);
    case InterferenceScenario::UlToUl: return combine_acir(p.aclr_ue, p.acs_bs);
    case InterferenceScenario::UlToDl: return combine_acir(p.aclr_ue, p.acs_ue);
  }
  throw std::invalid_argument("unknown interference scenario");
}

std::string to_string(SinrMode m) { return m == SinrMode::Mean ? "mean" : "worst_case"; }

SinrMode parse_sinr_mode(std::string_view s) {
  if (s == "mean") return SinrMode::Mean;
  if (s == "worst_case") return SinrMode::WorstCase;
  throw std::invalid_argument("unknown SINR mode '" + std::string(s) + "'");
}

double sinr(const LinkBudget& victim, std::span<const Interferer> interferers, double noise_dbm, SinrMode mode) {
  const double s = dbm2mw(victim.rx_power_dbm());
  double i = 0.0;
  for (const auto& x : interferers) {
    if (x.activity < 0.0 || x.activity > 1.0) throw std::invalid_argument("activity must lie in [0, 1]");
    const double w = mode == SinrMode::Mean ? x.activity : (x.activity > 0.0 ? 1.0 : 0.0);
    if (w > 0.0) i += w * dbm2mw(x.link.rx_power_dbm());
  }
  return lin2db(s / (dbm2mw(noise_dbm) + i));
}

}  // namespace coex
