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
#include "coex/tdd.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "coex/units.hpp"

namespace coex {

std::string to_string(Direction d) { return d == Direction::Downlink ? "dl" : "ul"; }

Direction parse_direction(std::string_view s) {
  if (s == "dl" || s == "DL" || s == "downlink") return Direction::Downlink;
  if (s == "ul" || s == "UL" || s == "uplink") return Direction::Uplink;
  throw std::invalid_argument("unknown direction '" + std::string(s) + "'");
}

std::size_t TddPattern::count(Direction d) const {
  return static_cast<std::size_t>(std::count(slots.begin(), slots.end(), d));
}

TddPattern parse_pattern(std::string_view text, double slot_duration_us) {
  if (text.empty()) throw std::invalid_argument("empty TDD pattern");
  if (!(slot_duration_us > 0.0)) throw std::invalid_argument("slot duration must be positive");
  TddPattern p;
  p.slot_duration_us = slot_duration_us;
  for (char c : text) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'D': p.slots.push_back(Direction::Downlink); break;
      case 'U': p.slots.push_back(Direction::Uplink); break;
      default:
        throw std::invalid_argument("invalid TDD slot '" + std::string(1, c) + "' in pattern '" +
                                    std::string(text) + "'");
    }
  }
  return p;
}

std::string to_string(const TddPattern& p) {
  std::string s;
  for (auto d : p.slots) s.push_back(d == Direction::Downlink ? 'D' : 'U');
  return s;
}

DirectionFractions direction_fractions(const TddPattern& p) {
  if (p.slots.empty()) throw std::invalid_argument("empty TDD pattern");
  const double fd = static_cast<double>(p.count(Direction::Downlink)) / static_cast<double>(p.size());
  return {fd, 1.0 - fd};
}

std::string to_string(InterferenceScenario s) {
  switch (s) {
    case InterferenceScenario::DlToDl: return "DL-to-DL (BS-to-UE)";
    case InterferenceScenario::DlToUl: return "DL-to-UL (BS-to-BS)";
    case InterferenceScenario::UlToUl: return "UL-to-UL (UE-to-BS)";
    case InterferenceScenario::UlToDl: return "UL-to-DL (UE-to-UE)";
  }
  return "?";
}

InterferenceScenario classify(Direction aggressor, Direction victim) {
  if (aggressor == Direction::Downlink)
    return victim == Direction::Downlink ? InterferenceScenario::DlToDl : InterferenceScenario::DlToUl;
  return victim == Direction::Uplink ? InterferenceScenario::UlToUl : InterferenceScenario::UlToDl;
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d <= 0 || n < 0) throw std::invalid_argument("Rational expects n >= 0 and d > 0");
  const std::int64_t g = std::gcd(n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t l = std::lcm(a.den, b.den);
  return {a.num * (l / a.den) + b.num * (l / b.den), l};
}

Rational operator*(const Rational& a, const Rational& b) { return {a.num * b.num, a.den * b.den}; }

std::string to_string(const Rational& r) {
  return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

Rational ScenarioMix::total() const {
  Rational t{0, 1};
  for (const auto& p : probability) t = t + p;
  return t;
}

double ScenarioMix::conditional(Direction aggressor, Direction victim) const {
  const double joint = (*this)[classify(aggressor, victim)];
  const Direction other = aggressor == Direction::Downlink ? Direction::Uplink : Direction::Downlink;
  const double marginal = joint + (*this)[classify(other, victim)];
  return marginal > 0.0 ? joint / marginal : 0.0;
}

std::string to_string(ScenarioMode m) { return m == ScenarioMode::Aligned ? "aligned" : "marginal"; }

ScenarioMode parse_scenario_mode(std::string_view s) {
  if (s == "aligned") return ScenarioMode::Aligned;
  if (s == "marginal") return ScenarioMode::Marginal;
  throw std::invalid_argument("unknown scenario mode '" + std::string(s) + "'");
}

namespace {

void require_nonempty(const TddPattern& a, const TddPattern& b) {
  if (a.slots.empty() || b.slots.empty()) throw std::invalid_argument("empty TDD pattern");
}

ScenarioMix aligned_at(const TddPattern& aggressor, const TddPattern& victim, std::size_t offset) {
  const auto n = static_cast<std::int64_t>(std::lcm(aggressor.size(), victim.size()));
  std::array<std::int64_t, 4> counts{};
  for (std::int64_t t = 0; t < n; ++t) {
    const Direction a = aggressor.slots[(static_cast<std::size_t>(t) + offset) % aggressor.size()];
    const Direction v = victim.slots[static_cast<std::size_t>(t) % victim.size()];
    ++counts[static_cast<int>(classify(a, v))];
  }
  ScenarioMix mix;
  for (int k = 0; k < 4; ++k) mix.probability[k] = Rational(counts[k], n);
  return mix;
}

}  // namespace

ScenarioMix scenario_probabilities(const TddPattern& aggressor, const TddPattern& victim, ScenarioMode mode) {
  require_nonempty(aggressor, victim);
  if (mode == ScenarioMode::Aligned) return aligned_at(aggressor, victim, 0);

  const auto na = static_cast<std::int64_t>(aggressor.size());
  const auto nv = static_cast<std::int64_t>(victim.size());
  const Rational ad(static_cast<std::int64_t>(aggressor.count(Direction::Downlink)), na);
  const Rational au(static_cast<std::int64_t>(aggressor.count(Direction::Uplink)), na);
  const Rational vd(static_cast<std::int64_t>(victim.count(Direction::Downlink)), nv);
  const Rational vu(static_cast<std::int64_t>(victim.count(Direction::Uplink)), nv);
  ScenarioMix mix;
  mix.probability[static_cast<int>(InterferenceScenario::DlToDl)] = ad * vd;
  mix.probability[static_cast<int>(InterferenceScenario::DlToUl)] = ad * vu;
  mix.probability[static_cast<int>(InterferenceScenario::UlToUl)] = au * vu;
  mix.probability[static_cast<int>(InterferenceScenario::UlToDl)] = au * vd;
  return mix;
}

ScenarioMix offset_averaged_probabilities(const TddPattern& aggressor, const TddPattern& victim) {
  require_nonempty(aggressor, victim);
  const auto n = static_cast<std::int64_t>(aggressor.size());
  ScenarioMix acc;
  for (std::size_t off = 0; off < aggressor.size(); ++off) {
    const ScenarioMix m = aligned_at(aggressor, victim, off);
    for (int k = 0; k < 4; ++k) acc.probability[k] = acc.probability[k] + m.probability[k];
  }
  for (auto& p : acc.probability) p = p * Rational(1, n);
  return acc;
}

LatencyCheck latency_feasibility(const TddPattern& p, Direction dir, double tti_us, double processing_us,
                                 double budget_us) {
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.slots[i] == dir) starts.push_back(i);
  if (starts.empty()) return {false, kInf};

  // An arrival just after a slot of `dir` begins misses it and waits for the
  // start of the next one; the supremum of the wait is the largest cyclic gap.
  std::size_t max_gap = 0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const std::size_t next = k + 1 < starts.size() ? starts[k + 1] : starts[0] + p.size();
    max_gap = std::max(max_gap, next - starts[k]);
  }
  const double delay = static_cast<double>(max_gap) * p.slot_duration_us + tti_us + processing_us;
  return {delay <= budget_us, delay};
}

}  // namespace coex
