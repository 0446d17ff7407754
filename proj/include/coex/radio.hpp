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
#include <span>

#include "coex/propagation.hpp"
#include "coex/tdd.hpp"

namespace coex {

/// Thermal noise in dBm over `bandwidth_hz`.
double noise_power(double bandwidth_hz, double noise_figure_db);

struct PowerControlParams {
  double alpha = 0.8;
  double target_snr_db = 10.0;
  double p_max_dbm = 23.0;
  double p0_dbm = -82.0;  // noise_power + target_snr at the receiving BS

  static PowerControlParams from_noise(double alpha, double target_snr_db, double p_max_dbm,
                                       double bs_noise_dbm);
};

/// Fractional open-loop uplink power: min(p_max, p0 + alpha * PL).
double uplink_tx_power(double pl_total_db, const PowerControlParams& pc);

struct AcirParams {
  double aclr_bs = 45.0;
  double acs_bs = 45.0;
  double aclr_ue = 30.0;
  double acs_ue = 30.0;
};

double combine_acir(double aclr_db, double acs_db);
double scenario_acir(InterferenceScenario s, const AcirParams& p);

struct LinkBudget {
  double tx_power_dbm = 0.0;
  PathlossBreakdown pathloss;
  double tx_gain_db = 0.0;
  double rx_gain_db = 0.0;
  double acir_db = 0.0;
  double extra_isolation_db = 0.0;

  double rx_power_dbm() const {
    return tx_power_dbm + tx_gain_db + rx_gain_db - pathloss.total - acir_db - extra_isolation_db;
  }
};

enum class SinrMode { Mean, WorstCase };

std::string to_string(SinrMode m);
SinrMode parse_sinr_mode(std::string_view s);

struct Interferer {
  LinkBudget link;
  double activity = 1.0;
};

/// SINR in dB. Mean weights every interferer by its activity; WorstCase keeps
/// every interferer with non-zero activity at full power.
double sinr(const LinkBudget& victim, std::span<const Interferer> interferers, double noise_dbm, SinrMode mode);

/// Column vector of received interference (mW): rx_mw * weights.
template <typename MatrixT, typename VectorT>
Eigen::VectorXd aggregate_interference(const Eigen::MatrixBase<MatrixT>& rx_mw,
                                       const Eigen::MatrixBase<VectorT>& weights) {
  return rx_mw * weights;
}

/// Element-wise SINR in linear scale: signal / (noise + interference).
template <typename SigT, typename IntT>
Eigen::ArrayXd sinr_linear(const Eigen::ArrayBase<SigT>& signal_mw, double noise_mw,
                           const Eigen::ArrayBase<IntT>& interference_mw) {
  return signal_mw / (noise_mw + interference_mw);
}

}  // namespace coex
