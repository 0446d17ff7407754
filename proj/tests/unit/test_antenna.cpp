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
#include <random>

#include "coex/antenna.hpp"
#include "coex/units.hpp"

using namespace coex;

namespace {

ArrayConfig macro_panel() {
  ArrayConfig a;
  a.v = 8;
  a.h = 8;
  a.ps = 2;
  return a;
}

}  // namespace

TEST_CASE("element pattern") {
  const ArrayConfig a;
  CHECK(element_gain(0.0, 0.0, a) == doctest::Approx(8.0));
  CHECK(element_gain(65.0, 0.0, a) == doctest::Approx(-4.0));
  CHECK(element_gain(32.5, 0.0, a) == doctest::Approx(5.0));
  CHECK(element_gain(0.0, 32.5, a) == doctest::Approx(5.0));
  CHECK(element_gain(180.0, 0.0, a) == doctest::Approx(-22.0));
  CHECK(element_gain(120.0, 80.0, a) == doctest::Approx(-22.0));
  CHECK(element_gain(-40.0, 0.0, a) == doctest::Approx(element_gain(40.0, 0.0, a)));
  CHECK(element_gain(350.0, 0.0, a) == doctest::Approx(element_gain(-10.0, 0.0, a)));
}

TEST_CASE("array gain from element count") {
  CHECK(macro_panel().total_elements() == 128);
  CHECK(macro_panel().array_gain_db() == doctest::Approx(21.07).epsilon(1e-3));
  ArrayConfig f;
  f.v = 2;
  f.h = 4;
  f.vs = 2;
  f.ps = 2;
  CHECK(f.array_gain_db() == doctest::Approx(15.05).epsilon(1e-3));
  ArrayConfig bad;
  bad.v = 0;
  CHECK_THROWS_AS(bad.array_gain_db(), std::invalid_argument);
}

TEST_CASE("gain towards a point honours azimuth and downtilt") {
  ArrayConfig a = macro_panel();
  a.downtilt_deg = 10.0;
  a.azimuth_deg = 120.0;
  const Vec3 bs(0, 0, 25);
  // A ground point on the boresight at the tilt angle sees the peak.
  const double d = 23.5 / std::tan(deg2rad(10.0));
  const Vec3 ue(d * std::cos(deg2rad(120.0)), d * std::sin(deg2rad(120.0)), 1.5);
  CHECK(bs_gain_towards(a, bs, ue, LinkRole::Serving) == doctest::Approx(8.0 + a.array_gain_db()));
  const Vec3 behind = -ue + Vec3(0, 0, 3.0);
  CHECK(bs_gain_towards(a, bs, behind, LinkRole::Serving) < 8.0 + a.array_gain_db() - 25.0);
}

TEST_CASE("interfering gain never exceeds serving gain") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-300.0, 300.0), bo(0.0, 30.0);
  ArrayConfig a = macro_panel();
  a.downtilt_deg = 6.0;
  for (int i = 0; i < 200; ++i) {
    const Vec3 to(u(rng), u(rng), 1.5);
    const double b = bo(rng);
    const double s = bs_gain_towards(a, Vec3(0, 0, 25), to, LinkRole::Serving, b);
    const double x = bs_gain_towards(a, Vec3(0, 0, 25), to, LinkRole::Interfering, b);
    CHECK(x <= s);
    CHECK(s - x == doctest::Approx(b));
  }
}

TEST_CASE("link gain") {
  ArrayConfig a = macro_panel();
  const Vec3 p(0, 0, 25), q(100, 0, 1.5);
  CHECK(link_antenna_gain(std::nullopt, p, std::nullopt, q, LinkRole::Interfering, 9.0) == 0.0);
  const double one = bs_gain_towards(a, p, q, LinkRole::Serving);
  CHECK(link_antenna_gain(a, p, std::nullopt, q, LinkRole::Serving) == doctest::Approx(one));
  CHECK(link_antenna_gain(std::nullopt, q, a, p, LinkRole::Serving) == doctest::Approx(one));
  const Vec3 r(300, 10, 8);
  ArrayConfig f;
  f.azimuth_deg = 180.0;
  const double both = bs_gain_towards(a, p, r, LinkRole::Serving) + bs_gain_towards(f, r, p, LinkRole::Serving);
  CHECK(link_antenna_gain(a, p, f, r, LinkRole::Interfering, 4.0) == doctest::Approx(both - 4.0));
}
