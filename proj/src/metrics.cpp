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
#include "coex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "coex/units.hpp"

namespace coex {

AvailabilityResult service_availability(std::span<const std::uint8_t> indicators, Direction direction) {
  if (indicators.empty()) throw std::invalid_argument("service_availability: no samples");
  AvailabilityResult r;
  r.direction = direction;
  r.samples = indicators.size();
  for (auto x : indicators) r.successes += x ? 1 : 0;
  const double p = static_cast<double>(r.successes) / static_cast<double>(r.samples);
  r.availability = 100.0 * p;
  r.ci95_binomial = 100.0 * 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(r.samples));
  return r;
}

int max_capacity_evaluations(const CapacitySearch& s) {
  return 2 + static_cast<int>(std::ceil(std::log2((s.hi - s.lo) / s.tol)));
}

CapacityResult system_capacity(const std::function<double(double)>& evaluator, const CapacitySearch& search,
                               Direction direction) {
  if (!(search.lo < search.hi)) throw std::invalid_argument("system_capacity: lo must be below hi");
  if (!(search.tol > 0.0)) throw std::invalid_argument("system_capacity: tol must be positive");

  CapacityResult r;
  r.direction = direction;
  std::vector<std::pair<double, double>> seen;
  auto eval = [&](double rate) {
    const double a = evaluator(rate);
    ++r.evaluations;
    for (const auto& [x, y] : seen)
      if ((x < rate && a > y) || (x > rate && a < y)) r.non_monotone = true;
    seen.emplace_back(rate, a);
    return a >= search.target;
  };

  double lo = search.lo;
  double hi = search.hi;
  if (!eval(lo)) {
    r.infeasible_at_lo = true;
    r.capacity = 0.0;
    r.lo = lo;
    r.hi = lo;
    return r;
  }
  if (eval(hi)) {
    r.unsaturated = true;
    r.capacity = hi;
    r.lo = r.hi = hi;
    return r;
  }
  while (hi - lo > search.tol) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid))
      lo = mid;
    else
      hi = mid;
  }
  r.capacity = lo;
  r.lo = lo;
  r.hi = hi;
  return r;
}

int closest_macro_sector(const NetworkLayout& layout) {
  const Vec2 c = layout.factory.centroid();
  const std::size_t s = layout.nearest_site(c);
  const Vec2 site = layout.image_near(layout.sites[s].position, c);
  const Vec2 d = c - site;
  const double az = rad2deg(std::atan2(d.y(), d.x()));
  int best = 0;
  double best_off = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const double off = std::abs(wrap_deg(az - layout.sites[s].sector_azimuth_deg[static_cast<std::size_t>(k)]));
    if (off < best_off) {
      best_off = off;
      best = k;
    }
  }
  return static_cast<int>(s) * 3 + best;
}

RateStats embb_rate_stats(std::span<const EmbbUserRate> users, const NetworkLayout& layout, RateRegion region,
                          double margin) {
  RateStats st;
  double sum = 0.0;
  const int sector = region == RateRegion::ClosestMacroSectorUplink ? closest_macro_sector(layout) : -1;
  for (const auto& u : users) {
    if (region == RateRegion::PolygonAroundFactory) {
      const Vec2 p = layout.image_near(u.xy, layout.factory.centroid());
      if (layout.factory.contains(p) || layout.factory.distance_to(p) > margin) continue;
      sum += u.dl_rate;
    } else {
      if (u.serving_cell != sector) continue;
      sum += u.ul_rate;
    }
    ++st.users;
  }
  st.empty = st.users == 0;
  st.mean = st.empty ? 0.0 : sum / static_cast<double>(st.users);
  return st;
}

double relative_metric(double value, double baseline) {
  if (!(baseline > 0.0)) throw std::invalid_argument("relative_metric: baseline must be positive");
  return 100.0 * (value - baseline) / baseline;
}

MeanCi mean_ci95(std::span<const double> values) {
  MeanCi r;
  r.n = values.size();
  if (values.empty()) return r;
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean = sum / static_cast<double>(r.n);
  if (r.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    const double sd = std::sqrt(ss / static_cast<double>(r.n - 1));
    r.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(r.n));
  }
  return r;
}

}  // namespace coex
