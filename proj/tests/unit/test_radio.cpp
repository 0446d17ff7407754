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

#include <random>
#include <vector>

#include "coex/radio.hpp"
#include "coex/units.hpp"

using namespace coex;

TEST_CASE("thermal noise") {
  CHECK(noise_power(50e6, 5.0) == doctest::Approx(-92.0).epsilon(5e-4));
  CHECK(noise_power(50e6, 9.0) == doctest::Approx(-88.0).epsilon(6e-4));
  CHECK(noise_power(1.0, 0.0) == doctest::Approx(-174.0));
  CHECK_THROWS_AS(noise_power(0.0, 5.0), std::invalid_argument);
}

TEST_CASE("uplink power control") {
  const auto pc = PowerControlParams::from_noise(0.8, 10.0, 23.0, -92.0);
  CHECK(pc.p0_dbm == doctest::Approx(-82.0));
  CHECK(uplink_tx_power(100.0, pc) == doctest::Approx(-2.0));
  CHECK(uplink_tx_power(200.0, pc) == doctest::Approx(23.0));
  const auto full = PowerControlParams::from_noise(1.0, 10.0, 23.0, -92.0);
  CHECK(uplink_tx_power(0.0, full) == doctest::Approx(-82.0));
  CHECK_THROWS_AS(PowerControlParams::from_noise(1.5, 10.0, 23.0, -92.0), std::invalid_argument);
}

TEST_CASE("ACIR combining") {
  CHECK(combine_acir(45, 30) == doctest::Approx(29.86).epsilon(2e-4));
  CHECK(combine_acir(45, 45) == doctest::Approx(41.99).epsilon(2e-4));
  CHECK(combine_acir(30, 30) == doctest::Approx(26.99).epsilon(2e-4));
  const AcirParams p;
  using IS = InterferenceScenario;
  CHECK(scenario_acir(IS::DlToDl, p) == doctest::Approx(29.86).epsilon(2e-4));
  CHECK(scenario_acir(IS::DlToUl, p) == doctest::Approx(41.99).epsilon(2e-4));
  CHECK(scenario_acir(IS::UlToUl, p) == doctest::Approx(29.86).epsilon(2e-4));
  CHECK(scenario_acir(IS::UlToDl, p) == doctest::Approx(26.99).epsilon(2e-4));
  CHECK(combine_acir(45, 30) < 30.0);
  CHECK_THROWS_AS(combine_acir(0, 30), std::invalid_argument);
}

namespace {

LinkBudget budget(double rx_dbm) {
  LinkBudget b;
  b.tx_power_dbm = rx_dbm;
  return b;
}

}  // namespace

TEST_CASE("SINR aggregation") {
  const LinkBudget s = budget(-70.0);
  CHECK(sinr(s, {}, -90.0, SinrMode::Mean) == doctest::Approx(20.0));
  std::vector<Interferer> off{{budget(-60.0), 0.0}};
  CHECK(sinr(s, off, -90.0, SinrMode::Mean) == doctest::Approx(20.0));
  std::vector<Interferer> one{{budget(-80.0), 1.0}};
  std::vector<Interferer> two{{budget(-80.0), 1.0}, {budget(-80.0), 1.0}};
  const double n = -200.0;
  CHECK(sinr(s, one, n, SinrMode::Mean) - sinr(s, two, n, SinrMode::Mean) == doctest::Approx(3.0103).epsilon(1e-4));
  std::vector<Interferer> half{{budget(-80.0), 0.5}};
  CHECK(sinr(s, half, n, SinrMode::Mean) == doctest::Approx(13.0103).epsilon(1e-4));
  CHECK(sinr(s, half, n, SinrMode::WorstCase) == doctest::Approx(10.0).epsilon(1e-6));
  std::vector<Interferer> bad{{budget(-80.0), 1.5}};
  CHECK_THROWS_AS(sinr(s, bad, n, SinrMode::Mean), std::invalid_argument);
}

TEST_CASE("extra isolation never lowers SINR and converges to the intra-network value") {
  const LinkBudget s = budget(-70.0);
  Interferer intra{budget(-85.0), 0.7};
  double prev = -1e9;
  for (double iso = 0.0; iso <= 200.0; iso += 10.0) {
    Interferer inter{budget(-75.0), 0.4};
    inter.link.extra_isolation_db = iso;
    const std::vector<Interferer> xs{intra, inter};
    const double v = sinr(s, xs, -95.0, SinrMode::Mean);
    CHECK(v >= prev);
    prev = v;
  }
  const std::vector<Interferer> only{intra};
  CHECK(prev == doctest::Approx(sinr(s, only, -95.0, SinrMode::Mean)).epsilon(1e-12));
}

TEST_CASE("matrix aggregation agrees with the scalar loop") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd rx(30, 24);
  Eigen::VectorXd w(24);
  for (int i = 0; i < rx.rows(); ++i)
    for (int j = 0; j < rx.cols(); ++j) rx(i, j) = 1e-9 * u(rng);
  for (int j = 0; j < w.size(); ++j) w[j] = u(rng);
  const Eigen::VectorXd agg = aggregate_interference(rx, w);
  Eigen::ArrayXd sig = Eigen::ArrayXd::Constant(30, 1e-8);
  const Eigen::ArrayXd s = sinr_linear(sig, 1e-10, agg.array());
  for (int i = 0; i < rx.rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < rx.cols(); ++j) acc += rx(i, j) * w[j];
    CHECK(agg[i] == doctest::Approx(acc).epsilon(1e-12));
    CHECK(s[i] == doctest::Approx(1e-8 / (1e-10 + acc)).epsilon(1e-12));
  }
}

TEST_CASE("SINR mode names") {
  CHECK(parse_sinr_mode("worst_case") == SinrMode::WorstCase);
  CHECK(parse_sinr_mode(to_string(SinrMode::Mean)) == SinrMode::Mean);
  CHECK_THROWS_AS(parse_sinr_mode("p99"), std::invalid_argument);
}
