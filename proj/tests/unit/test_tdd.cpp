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
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "coex/tdd.hpp"

using namespace coex;
using IS = InterferenceScenario;

namespace {

TddPattern pat(const char* s) { return parse_pattern(s); }

Rational pct(std::int64_t num, std::int64_t den) { return Rational(num, den); }

}  // namespace

TEST_CASE("pattern parsing") {
  const auto p = pat("DDDU");
  REQUIRE(p.size() == 4);
  CHECK(p.slots[3] == Direction::Uplink);
  CHECK(pat("d").slots == std::vector<Direction>{Direction::Downlink});
  CHECK(to_string(pat("dudu")) == "DUDU");
  CHECK_THROWS_AS(pat("DXDU"), std::invalid_argument);
  CHECK_THROWS_AS(pat(""), std::invalid_argument);
}

TEST_CASE("direction fractions") {
  CHECK(direction_fractions(pat("DDDU")).downlink == 0.75);
  CHECK(direction_fractions(pat("DDDU")).uplink == 0.25);
  CHECK(direction_fractions(pat("DUDU")).downlink == 0.5);
  CHECK(direction_fractions(pat("D")).uplink == 0.0);
  CHECK(classify(Direction::Downlink, Direction::Uplink) == IS::DlToUl);
  CHECK(classify(Direction::Uplink, Direction::Downlink) == IS::UlToDl);
}

TEST_CASE("interference scenario table") {
  SUBCASE("synchronised") {
    const auto m = scenario_probabilities(pat("DUDU"), pat("DUDU"), ScenarioMode::Aligned);
    CHECK(m.exact(IS::DlToDl) == pct(1, 2));
    CHECK(m.exact(IS::DlToUl) == pct(0, 1));
    CHECK(m.exact(IS::UlToUl) == pct(1, 2));
    CHECK(m.exact(IS::UlToDl) == pct(0, 1));
  }
  SUBCASE("unsynchronised, both directions of aggression") {
    const auto ab = scenario_probabilities(pat("DDDU"), pat("DUDU"), ScenarioMode::Marginal);
    CHECK(ab.exact(IS::DlToDl) == pct(3, 8));
    CHECK(ab.exact(IS::DlToUl) == pct(3, 8));
    CHECK(ab.exact(IS::UlToUl) == pct(1, 8));
    CHECK(ab.exact(IS::UlToDl) == pct(1, 8));
    const auto ba = scenario_probabilities(pat("DUDU"), pat("DDDU"), ScenarioMode::Marginal);
    CHECK(ba.exact(IS::DlToDl) == pct(3, 8));
    CHECK(ba.exact(IS::DlToUl) == pct(1, 8));
    CHECK(ba.exact(IS::UlToUl) == pct(1, 8));
    CHECK(ba.exact(IS::UlToDl) == pct(3, 8));
  }
  SUBCASE("slot-aligned DDDU against DUDU") {
    const auto m = scenario_probabilities(pat("DDDU"), pat("DUDU"), ScenarioMode::Aligned);
    CHECK(m.exact(IS::DlToDl) == pct(1, 2));
    CHECK(m.exact(IS::DlToUl) == pct(1, 4));
    CHECK(m.exact(IS::UlToUl) == pct(1, 4));
    CHECK(m.exact(IS::UlToDl) == pct(0, 1));
  }
  SUBCASE("offset averaging equals the marginal mix") {
    const auto avg = offset_averaged_probabilities(pat("DDDU"), pat("DUDU"));
    const auto mar = scenario_probabilities(pat("DDDU"), pat("DUDU"), ScenarioMode::Marginal);
    for (auto s : kScenarioRows) CHECK(avg.exact(s) == mar.exact(s));
  }
  SUBCASE("conditional probabilities") {
    const auto m = scenario_probabilities(pat("DDDU"), pat("DUDU"), ScenarioMode::Marginal);
    CHECK(m.conditional(Direction::Downlink, Direction::Uplink) == doctest::Approx(0.75));
    const auto d = scenario_probabilities(pat("DUDU"), pat("D"), ScenarioMode::Marginal);
    CHECK(d.conditional(Direction::Downlink, Direction::Uplink) == 0.0);
  }
}

TEST_CASE("random pattern pairs") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    auto random_pattern = [&] {
      const int n = 1 + static_cast<int>(rng() % 12);
      std::string s;
      for (int i = 0; i < n; ++i) s += (rng() & 1) ? 'U' : 'D';
      return pat(s.c_str());
    };
    const auto a = random_pattern(), b = random_pattern();
    for (auto mode : {ScenarioMode::Aligned, ScenarioMode::Marginal})
      CHECK(scenario_probabilities(a, b, mode).total() == pct(1, 1));
    // Swapping roles transposes the cross-link entries.
    const auto ab = scenario_probabilities(a, b, ScenarioMode::Marginal);
    const auto ba = scenario_probabilities(b, a, ScenarioMode::Marginal);
    CHECK(ab.exact(IS::DlToUl) == ba.exact(IS::UlToDl));
    CHECK(ab.exact(IS::DlToDl) == ba.exact(IS::DlToDl));
    const auto same = scenario_probabilities(a, a, ScenarioMode::Aligned);
    CHECK(same.exact(IS::DlToUl) == pct(0, 1));
    CHECK(same.exact(IS::UlToDl) == pct(0, 1));
  }
}

namespace {

// Brute-force sweep of arrival instants over one cycle.
double swept_worst_delay(const TddPattern& p, Direction dir, double tti, double proc) {
  const double T = p.slot_duration_us;
  const double cycle = T * static_cast<double>(p.size());
  double worst = 0.0;
  for (double t = 0.0; t < cycle; t += 0.5) {
    double wait = 1e18;
    for (std::size_t k = 0; k < 2 * p.size(); ++k) {
      const double start = T * static_cast<double>(k);
      if (start >= t && p.slots[k % p.size()] == dir) {
        wait = start - t;
        break;
      }
    }
    worst = std::max(worst, wait + tti + proc);
  }
  return worst;
}

}  // namespace

TEST_CASE("latency feasibility") {
  const auto dudu = latency_feasibility(pat("DUDU"), Direction::Uplink, 143, 300, 1000);
  CHECK(dudu.feasible);
  CHECK(dudu.worst_case_delay_us == doctest::Approx(729.0));
  const auto dddu = latency_feasibility(pat("DDDU"), Direction::Uplink, 143, 300, 1000);
  CHECK_FALSE(dddu.feasible);
  CHECK(dddu.worst_case_delay_us == doctest::Approx(1015.0));
  const auto none = latency_feasibility(pat("DDDD"), Direction::Uplink, 143, 300, 1000);
  CHECK_FALSE(none.feasible);
  CHECK(std::isinf(none.worst_case_delay_us));

  for (const char* s : {"DUDU", "DDDU", "DDUU", "DDDDDDDU", "DUUU", "DDUDU"})
    for (auto dir : {Direction::Downlink, Direction::Uplink}) {
      const auto p = pat(s);
      const auto lc = latency_feasibility(p, dir, 143, 300, 1000);
      CHECK(lc.worst_case_delay_us == doctest::Approx(swept_worst_delay(p, dir, 143, 300)).epsilon(1e-3));
    }
}

TEST_CASE("names") {
  CHECK(parse_direction(to_string(Direction::Uplink)) == Direction::Uplink);
  CHECK(parse_scenario_mode("aligned") == ScenarioMode::Aligned);
  CHECK_THROWS_AS(parse_scenario_mode("random"), std::invalid_argument);
  CHECK(to_string(Rational(6, 16)) == "3/8");
}
