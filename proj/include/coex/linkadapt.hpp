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
#include <string>
#include <vector>

namespace coex {

enum class Modulation { QPSK, QAM16, QAM64 };

std::string to_string(Modulation m);
int bits_per_symbol(Modulation m);

struct CodeRate {
  int num = 1;
  int den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct McsEntry {
  Modulation modulation = Modulation::QPSK;
  CodeRate code_rate;
  double spectral_efficiency = 0.0;  // bits/s/Hz
  double sinr_threshold_db = 0.0;
};

/// MCS set sorted by spectral efficiency. Thresholds come from a Shannon-gap
/// rule: log2(1 + sinr / gap) = SE.
class McsTable {
 public:
  explicit McsTable(double shannon_gap_db = 3.0);

  const std::vector<McsEntry>& entries() const { return entries_; }
  double shannon_gap_db() const { return gap_db_; }
  /// Highest entry whose threshold does not exceed `sinr_db`, or nullptr.
  const McsEntry* select(double sinr_db) const;
  /// Spectral efficiency after MCS selection (0 on outage).
  double spectral_efficiency(double sinr_db) const;

 private:
  double gap_db_;
  std::vector<McsEntry> entries_;
  std::vector<double> thresholds_;
};

std::optional<McsEntry> select_mcs(double sinr_db, const McsTable& table);

/// bits/s, or 0 on outage.
double achievable_rate(double sinr_db, double bandwidth_hz, double overhead, const McsTable& table);

struct QosRequirement {
  double payload_bits = 256.0;
  double latency_budget_us = 1000.0;
  double reliability = 0.99999;
  double tti_us = 143.0;
  int symbols_per_tti = 4;
  double scs_khz = 30.0;
};

/// Rate needed to carry the payload in a single TTI (bits/s).
double required_rate(const QosRequirement& q);

/// x_i of a floor sample: 1 iff every criterion holds.
int qos_indicator(bool dl_ok, bool ul_ok, bool load_ok, bool latency_ok);

/// modulation,code_rate,spectral_efficiency,threshold_db
std::string mcs_table_csv(const McsTable& table);

}  // namespace coex
