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
#include "coex/linkadapt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "coex/units.hpp"

namespace coex {

std::string to_string(Modulation m) {
  switch (m) {
    case Modulation::QPSK: return "QPSK";
    case Modulation::QAM16: return "16QAM";
    case Modulation::QAM64: return "64QAM";
  }
  return "?";
}

int bits_per_symbol(Modulation m) {
  switch (m) {
    case Modulation::QPSK: return 2;
    case Modulation::QAM16: return 4;
    case Modulation::QAM64: return 6;
  }
  return 0;
}

McsTable::McsTable(double shannon_gap_db) : gap_db_(shannon_gap_db) {
  if (shannon_gap_db < 0.0) throw std::invalid_argument("Shannon gap must be >= 0 dB");
  const struct {
    Modulation m;
    CodeRate r;
  } set[] = {
      {Modulation::QPSK, {1, 20}},  {Modulation::QPSK, {1, 10}},  {Modulation::QPSK, {1, 5}},
      {Modulation::QPSK, {1, 3}},   {Modulation::QAM16, {1, 3}},  {Modulation::QAM16, {1, 2}},
      {Modulation::QAM16, {2, 3}},  {Modulation::QAM64, {2, 3}},  {Modulation::QAM64, {3, 4}},
  };
  const double gap = db2lin(shannon_gap_db);
  for (const auto& e : set) {
    McsEntry m;
    m.modulation = e.m;
    m.code_rate = e.r;
    m.spectral_efficiency = bits_per_symbol(e.m) * e.r.value();
    m.sinr_threshold_db = lin2db(gap * (std::pow(2.0, m.spectral_efficiency) - 1.0));
    entries_.push_back(m);
    thresholds_.push_back(m.sinr_threshold_db);
  }
}

const McsEntry* McsTable::select(double sinr_db) const {
  if (std::isnan(sinr_db)) return nullptr;
  const auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), sinr_db);
  if (it == thresholds_.begin()) return nullptr;
  return &entries_[static_cast<std::size_t>(it - thresholds_.begin()) - 1];
}

double McsTable::spectral_efficiency(double sinr_db) const {
  const McsEntry* e = select(sinr_db);
  return e ? e->spectral_efficiency : 0.0;
}

std::optional<McsEntry> select_mcs(double sinr_db, const McsTable& table) {
  const McsEntry* e = table.select(sinr_db);
  if (!e) return std::nullopt;
  return *e;
}

double achievable_rate(double sinr_db, double bandwidth_hz, double overhead, const McsTable& table) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (overhead < 0.0 || overhead >= 1.0) throw std::invalid_argument("overhead must lie in [0, 1)");
  return table.spectral_efficiency(sinr_db) * bandwidth_hz * (1.0 - overhead);
}

double required_rate(const QosRequirement& q) {
  if (!(q.tti_us > 0.0)) throw std::invalid_argument("TTI must be positive");
  return q.payload_bits / (q.tti_us * 1e-6);
}

int qos_indicator(bool dl_ok, bool ul_ok, bool load_ok, bool latency_ok) {
  return dl_ok && ul_ok && load_ok && latency_ok ? 1 : 0;
}

std::string mcs_table_csv(const McsTable& table) {
  std::string out = "modulation,code_rate,spectral_efficiency,threshold_db\n";
  char buf[160];
  for (const auto& e : table.entries()) {
    std::snprintf(buf, sizeof buf, "%s,%d/%d,%.9g,%.9g\n", to_string(e.modulation).c_str(), e.code_rate.num,
                  e.code_rate.den, e.spectral_efficiency, e.sinr_threshold_db);
    out += buf;
  }
  return out;
}

}  // namespace coex
