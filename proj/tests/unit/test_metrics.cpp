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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "coex/metrics.hpp"

using namespace coex;

TEST_CASE("service availability") {
  std::vector<std::uint8_t> x{1, 1, 0, 1};
  const auto r = service_availability(x, Direction::Uplink);
  CHECK(r.availability == doctest::Approx(75.0));
  CHECK(r.samples == 4);
  CHECK(r.successes == 3);
  CHECK(r.direction == Direction::Uplink);
  CHECK(r.ci95_binomial == doctest::Approx(100.0 * 1.96 * std::sqrt(0.75 * 0.25 / 4.0)));
  std::vector<std::uint8_t> all(100, 1);
  CHECK(service_availability(all).availability == 100.0);
  CHECK(service_availability(all).ci95_binomial == 0.0);
  CHECK_THROWS_AS(service_availability(std::vector<std::uint8_t>{}), std::invalid_argument);

  std::mt19937_64 rng(4);
  std::vector<std::uint8_t> big(1000);
  for (auto& v : big) v = rng() % 3 ? 1 : 0;
  const double a = service_availability(big).availability;
  std::shuffle(big.begin(), big.end(), rng);
  CHECK(service_availability(big).availability == a);
}

namespace {

// Exhaustive scan: the largest grid rate whose availability meets the target.
double grid_search(const std::function<double(double)>& f, const CapacitySearch& s, double step) {
  double best = -1.0;
  for (double r = s.lo; r <= s.hi + 1e-12; r += step)
    if (f(r) >= s.target) best = r;
  return best;
}

}  // namespace

TEST_CASE("capacity bisection against a grid search on step evaluators") {
  const CapacitySearch s;  // 0..400, tol 0.25
  CHECK(max_capacity_evaluations(s) == 13);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.5, 399.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double edge = trial == 0 ? 5.0 : u(rng);
    auto step = [edge](double r) { return r <= edge ? 100.0 : 99.0; };
    const auto res = system_capacity(step, s);
    CHECK(res.capacity <= edge);
    CHECK(res.capacity >= edge - s.tol);
    CHECK(res.hi - res.lo <= s.tol);
    CHECK(res.evaluations <= max_capacity_evaluations(s));
    CHECK_FALSE(res.non_monotone);
    CHECK(std::abs(res.capacity - grid_search(step, s, s.tol / 16.0)) <= s.tol);
  }
}

TEST_CASE("capacity edge cases") {
  const CapacitySearch s;
  const auto never = system_capacity([](double) { return 99.0; }, s);
  CHECK(never.capacity == 0.0);
  CHECK(never.infeasible_at_lo);
  CHECK(never.evaluations == 1);
  const auto always = system_capacity([](double) { return 100.0; }, s);
  CHECK(always.capacity == 400.0);
  CHECK(always.unsaturated);
  // Pass/fail stays consistent under bisection; the availability values do not.
  const auto bumpy = system_capacity(
      [](double r) { return r < 10.0 ? 100.0 : (std::abs(r - 50.0) < 5.0 ? 99.9 : 99.0 - r / 100.0); }, s);
  CHECK(bumpy.non_monotone);

  CapacitySearch q = s;
  q.target = 99.9;
  const auto quant = system_capacity([](double r) { return r < 50.0 ? 100.0 : (r < 80.0 ? 99.95 : 99.0); }, q);
  CHECK(quant.capacity == doctest::Approx(80.0).epsilon(0.01));

  CapacitySearch bad = s;
  bad.tol = 0.0;
  CHECK_THROWS_AS(system_capacity([](double) { return 100.0; }, bad), std::invalid_argument);
  bad = s;
  bad.hi = bad.lo;
  CHECK_THROWS_AS(system_capacity([](double) { return 100.0; }, bad), std::invalid_argument);
}

namespace {

NetworkLayout near_bs() {
  LayoutParams lp;
  lp.placement = Placement::NearBS;
  return build_layout(lp);
}

}  // namespace

TEST_CASE("eMBB rate regions") {
  const auto L = near_bs();  // hall x 30..130, y -50..50
  CHECK(closest_macro_sector(L) == 0);
  std::vector<EmbbUserRate> users{
      {Vec2(145.0, 0.0), 0, 10.0, 1.0},   // 15 m east of the wall
      {Vec2(146.0, 0.0), 0, 99.0, 3.0},   // 16 m: outside the polygon
      {Vec2(80.0, -64.0), 4, 20.0, 5.0},  // 14 m south
      {Vec2(80.0, 0.0), 0, 1e9, 1e9},     // indoor points never count
  };
  const auto poly = embb_rate_stats(std::span<const EmbbUserRate>(users.data(), 3), L, RateRegion::PolygonAroundFactory);
  CHECK(poly.users == 2);
  CHECK(poly.mean == doctest::Approx(15.0));
  const auto inside = embb_rate_stats(std::span<const EmbbUserRate>(users.data() + 3, 1), L,
                                      RateRegion::PolygonAroundFactory);
  CHECK(inside.empty);
  const auto ul = embb_rate_stats(std::span<const EmbbUserRate>(users.data(), 3), L,
                                  RateRegion::ClosestMacroSectorUplink);
  CHECK(ul.users == 2);
  CHECK(ul.mean == doctest::Approx(2.0));
  std::vector<EmbbUserRate> one{{Vec2(140.0, 10.0), 2, 7.0, 0.0}};
  CHECK(embb_rate_stats(one, L, RateRegion::PolygonAroundFactory).mean == 7.0);
}

TEST_CASE("relative metric and confidence intervals") {
  CHECK(relative_metric(2.0, 2.0) == 0.0);
  CHECK(relative_metric(1.768, 1.0) == doctest::Approx(76.8));
  CHECK(relative_metric(0.463, 1.0) == doctest::Approx(-53.7));
  CHECK_THROWS_AS(relative_metric(1.0, 0.0), std::invalid_argument);
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto m = mean_ci95(v);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.ci95 == doctest::Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(mean_ci95(std::vector<double>{4.0}).ci95 == 0.0);
}
