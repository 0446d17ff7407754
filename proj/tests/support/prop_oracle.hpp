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

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "coex/geometry.hpp"
#include "coex/propagation.hpp"
#include "coex/rng.hpp"
#include "coex/units.hpp"

namespace coex {

namespace oracle {


// Straight-line transcription of the 3GPP formulas, no shared helpers.
inline double lg(double x) { return std::log10(x); }

inline double dbp(double hbs, double hut, double fc) { return 4.0 * (hbs - 1.0) * (hut - 1.0) * fc * 1e9 / 299792458.0; }

inline double pl(PathlossModel m, double d2d, double hbs, double hut, double fc, bool los) {
  const double lo = m == PathlossModel::InH_OpenOffice ? 1.0 : 10.0;
  double d3d = std::sqrt(d2d * d2d + (hbs - hut) * (hbs - hut));
  if (m == PathlossModel::InH_OpenOffice) {
    if (d3d < lo) d3d = lo;
    const double a = 32.4 + 17.3 * lg(d3d) + 20.0 * lg(fc);
    const double b = 17.3 + 38.3 * lg(d3d) + 24.9 * lg(fc);
    return los ? a : (a > b ? a : b);
  }
  if (d2d < lo) {
    d2d = lo;
    d3d = std::sqrt(d2d * d2d + (hbs - hut) * (hbs - hut));
  }
  const double bp = dbp(hbs, hut, fc);
  double a = 0.0, b = 0.0;
  if (m == PathlossModel::UMa) {
    a = d2d <= bp ? 28.0 + 22.0 * lg(d3d) + 20.0 * lg(fc)
                  : 28.0 + 40.0 * lg(d3d) + 20.0 * lg(fc) - 9.0 * lg(bp * bp + (hbs - hut) * (hbs - hut));
    b = 13.54 + 39.08 * lg(d3d) + 20.0 * lg(fc) - 0.6 * (hut - 1.5);
  } else {
    a = d2d <= bp ? 32.4 + 21.0 * lg(d3d) + 20.0 * lg(fc)
                  : 32.4 + 40.0 * lg(d3d) + 20.0 * lg(fc) - 9.5 * lg(bp * bp + (hbs - hut) * (hbs - hut));
    b = 22.4 + 35.3 * lg(d3d) + 21.3 * lg(fc) - 0.3 * (hut - 1.5);
  }
  return los ? a : (a > b ? a : b);
}

inline double wrapped(const NetworkLayout& L, Vec2 a, Vec2 b) {
  const double r = std::sqrt(7.0) * L.isd;
  const double a0 = std::atan2(2.0, std::sqrt(3.0));
  double best = (a - b).norm();
  for (int k = 0; k < 6; ++k) {
    const Vec2 t(r * std::cos(a0 + k * kPi / 3.0), r * std::sin(a0 + k * kPi / 3.0));
    best = std::min(best, (a - (b + t)).norm());
  }
  return best;
}

// Every image of `b` at the minimum wrapped distance from `a`. Points on a
// wrap-cell border have several, and any of them is a valid choice.
inline std::vector<Vec2> nearest_images(const NetworkLayout& L, Vec2 a, Vec2 b) {
  const double r = std::sqrt(7.0) * L.isd;
  const double a0 = std::atan2(2.0, std::sqrt(3.0));
  const double best = wrapped(L, a, b);
  std::vector<Vec2> out;
  for (int k = -1; k < 6; ++k) {
    const Vec2 t = k < 0 ? Vec2::Zero() : Vec2(r * std::cos(a0 + k * kPi / 3.0), r * std::sin(a0 + k * kPi / 3.0));
    if ((a - (b + t)).norm() <= best + 1e-6) out.push_back(b + t);
  }
  return out;
}

// Segment from `out` to `in` against the four wall segments; the crossing
// closest to `in` is the one the ray enters through.
inline void crossing(const FactoryBox& f, Vec2 out, Vec2 in, double* angle_deg, double* d_in) {
  const Vec2 c[4] = {f.origin, f.origin + Vec2(f.width, 0), f.origin + Vec2(f.width, f.depth),
                     f.origin + Vec2(0, f.depth)};
  double best = -1.0;
  for (int k = 0; k < 4; ++k) {
    const Vec2 p = c[k], q = c[(k + 1) % 4];
    const Vec2 r = in - out, s = q - p;
    const double den = r.x() * s.y() - r.y() * s.x();
    if (std::abs(den) < 1e-15) continue;
    const Vec2 w = p - out;
    const double t = (w.x() * s.y() - w.y() * s.x()) / den;
    const double u = (w.x() * r.y() - w.y() * r.x()) / den;
    if (t < -1e-12 || t > 1 + 1e-12 || u < -1e-12 || u > 1 + 1e-12) continue;
    if (t > best) {
      best = t;
      const Vec2 normal = std::abs(s.x()) > 0 ? Vec2(0, 1) : Vec2(1, 0);
      *angle_deg = std::acos(std::abs(r.dot(normal)) / r.norm()) * 180.0 / kPi;
      *d_in = (1.0 - t) * r.norm();
    }
  }
  if (best < 0.0) throw std::logic_error("oracle: segment does not cross the hall");
}


struct LinkCheck {
  int links = 0;
  int los_mismatches = 0;
  int model_mismatches = 0;
  int tied_images = 0;  // links whose outdoor end has several nearest images
  double worst_db = 0.0;
};

// Draws `per_class` random links of each of the six pair types and compares
// every component of the composite loss to the transcription above.
inline LinkCheck random_links(const NetworkLayout& L, const PropagationParams& pp, int per_class, std::uint64_t rng_seed,
                              std::uint64_t pl_seed) {
  const FactoryBox& f = L.factory;
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> plane(-800.0, 800.0);
  auto indoor_pt = [&] { return Vec2(f.origin + Vec2(u01(rng) * f.width, u01(rng) * f.depth)); };
  auto outdoor_pt = [&] {
    for (;;) {
      Vec2 p(plane(rng), plane(rng));
      if (!L.is_indoor(p)) return p;
    }
  };
  LinkCheck out;

  auto check = [&](const Node& a, const Node& b, PathlossModel model, bool wall) {
    const auto pb = composite_pathloss(L, a, b, pp, pl_seed);
    ++out.links;
    if (pb.model != model) {
      ++out.model_mismatches;
      return;
    }
    const double hbs = std::max(a.pos.height, b.pos.height);
    const double hut = std::min(a.pos.height, b.pos.height);
    const std::uint64_t lo = std::min(a.id, b.id), hi = std::max(a.id, b.id);
    const double sigma = model == PathlossModel::UMa   ? (pb.los ? 4.0 : 6.0)
                         : model == PathlossModel::UMi ? (pb.los ? 4.0 : 7.82)
                                                       : (pb.los ? 3.0 : 8.03);
    const double shadow = sigma * hash_normal(hash_of({pl_seed, static_cast<std::uint64_t>(Stream::Shadowing), lo, hi}));
    const double u_los = hash_uniform(hash_of({pl_seed, static_cast<std::uint64_t>(Stream::LosState), lo, hi}));

    const Node& o = is_indoor(a.kind) ? b : a;
    const Node& in = is_indoor(a.kind) ? a : b;
    std::vector<Vec2> images{o.pos.xy};
    if (wall) images = nearest_images(L, in.pos.xy, o.pos.xy);
    if (images.size() > 1) ++out.tied_images;
    const double d2d = wrapped(L, a.pos.xy, b.pos.xy);
    double dev = kInf;
    bool los_ok = false;
    for (const Vec2& img : images) {
      double ang = 0.0, din = 0.0;
      if (wall) crossing(f, img, in.pos.xy, &ang, &din);
      const double basic = pl(model, d2d, hbs, hut, pp.fc_ghz, pb.los);
      const double wl =
          wall ? pp.wall_perp_db + pp.wall_angular_coeff_db * std::pow(1.0 - std::cos(ang * kPi / 180.0), 2) : 0.0;
      const double indoor = wall ? pp.indoor_db_per_m * din : 0.0;
      const double total = basic + shadow + wl + indoor;
      const double d = std::max({std::abs(pb.basic_pl - basic), std::abs(pb.wall - wl), std::abs(pb.indoor - indoor),
                                 std::abs(pb.shadow - shadow), std::abs(pb.total - total)});
      if (d < dev) {
        dev = d;
        los_ok = (u_los < los_probability(model, std::max(0.0, d2d - (wall ? din : 0.0)), hut)) == pb.los;
      }
    }
    if (!los_ok) ++out.los_mismatches;
    out.worst_db = std::max(out.worst_db, dev);
  };

  for (int i = 0; i < per_class; ++i) {
    const int s = static_cast<int>(u01(rng) * 7);
    const Node mbs{NodeKind::MacroBs, static_cast<std::uint64_t>(s), {L.sites[static_cast<std::size_t>(s)].position, 25}};
    const Node fbs{NodeKind::FactoryBs, 100, {f.bs_position, 8}};
    const Node urllc{NodeKind::UrllcUe, 1000 + static_cast<std::uint64_t>(i), {indoor_pt(), 1.5}};
    const Node embb{NodeKind::EmbbUe, 5000 + static_cast<std::uint64_t>(i), {outdoor_pt(), 1.5}};
    check(mbs, embb, PathlossModel::UMa, false);
    check(fbs, urllc, PathlossModel::InH_OpenOffice, false);
    check(mbs, urllc, PathlossModel::UMa, true);
    check(fbs, mbs, PathlossModel::UMa, true);
    check(urllc, embb, PathlossModel::UMi, true);
    check(embb, fbs, PathlossModel::UMi, true);
  }
  return out;
}

}  // namespace oracle

}  // namespace coex
