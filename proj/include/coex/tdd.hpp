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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coex {

enum class Direction { Downlink, Uplink };

std::string to_string(Direction d);
Direction parse_direction(std::string_view s);

struct TddPattern {
  std::vector<Direction> slots;
  double slot_duration_us = 143.0;

  std::size_t size() const { return slots.size(); }
  std::size_t count(Direction d) const;
};

/// Case-insensitive string over {D, U}. Throws std::invalid_argument otherwise.
TddPattern parse_pattern(std::string_view text, double slot_duration_us = 143.0);
std::string to_string(const TddPattern& p);

struct DirectionFractions {
  double downlink = 0.0;
  double uplink = 0.0;

  double of(Direction d) const { return d == Direction::Downlink ? downlink : uplink; }
};

DirectionFractions direction_fractions(const TddPattern& p);

/// Named from the aggressor's direction to the victim's direction.
enum class InterferenceScenario { DlToDl, DlToUl, UlToUl, UlToDl };

/// Row order used when printing scenario tables.
inline constexpr std::array<InterferenceScenario, 4> kScenarioRows{
    InterferenceScenario::DlToDl, InterferenceScenario::DlToUl, InterferenceScenario::UlToUl,
    InterferenceScenario::UlToDl};

std::string to_string(InterferenceScenario s);
InterferenceScenario classify(Direction aggressor, Direction victim);

/// Non-negative reduced fraction.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
};

std::string to_string(const Rational& r);

struct ScenarioMix {
  std::array<Rational, 4> probability{};

  const Rational& exact(InterferenceScenario s) const { return probability[static_cast<int>(s)]; }
  double operator[](InterferenceScenario s) const { return exact(s).value(); }
  Rational total() const;
  /// P(aggressor in `aggressor` | victim in `victim`); 0 when the victim never uses that direction.
  double conditional(Direction aggressor, Direction victim) const;
};

enum class ScenarioMode { Aligned, Marginal };

std::string to_string(ScenarioMode m);
ScenarioMode parse_scenario_mode(std::string_view s);

/// Aligned pairs slots at offset 0 over the lcm-extended cycle; Marginal takes
/// the outer product of the direction fractions.
ScenarioMix scenario_probabilities(const TddPattern& aggressor, const TddPattern& victim, ScenarioMode mode);

/// Mix averaged over every cyclic offset of the aggressor (slot resolution).
ScenarioMix offset_averaged_probabilities(const TddPattern& aggressor, const TddPattern& victim);

struct LatencyCheck {
  bool feasible = false;
  double worst_case_delay_us = 0.0;
};

/// Worst case over arrival instants of: wait for the next full slot in `dir`,
/// one TTI of transmission, and processing.
LatencyCheck latency_feasibility(const TddPattern& p, Direction dir, double tti_us, double processing_us,
                                 double budget_us);

}  // namespace coex
