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
#include "coex/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "coex/antenna.hpp"
#include "coex/units.hpp"

namespace coex {

namespace {

constexpr int kDl = static_cast<int>(Direction::Downlink);
constexpr int kUl = static_cast<int>(Direction::Uplink);
constexpr int idx(Direction d) { return static_cast<int>(d); }
constexpr int idx(Network n) { return static_cast<int>(n); }

constexpr std::uint64_t kFactoryBsId = 100;
constexpr std::uint64_t kUrllcIdBase = 1'000'000;
constexpr std::uint64_t kEmbbIdBase = 2'000'000;

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

// Runs fn over [0, n) and rethrows the first failure in index order.
template <typename Fn>
void parallel_for_checked(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double mw(double dbm) { return dbm2mw(dbm); }

Vec3 at(const Vec2& xy, double h) { return {xy.x(), xy.y(), h}; }

}  // namespace

ResolvedScenario ResolvedScenario::resolve(const ScenarioConfig& cfg) {
  validate(cfg);
  ResolvedScenario r;
  r.cfg = cfg;
  r.layout = build_layout(cfg.layout_params());
  r.macro_pattern = cfg.macro_pattern();
  r.factory_pattern = cfg.factory_pattern();
  r.fraction[idx(Network::Macro)] = direction_fractions(r.macro_pattern);
  r.fraction[idx(Network::Factory)] = direction_fractions(r.factory_pattern);

  const ScenarioMode mode = cfg.effective_scenario_mode();
  const ScenarioMix on_factory = scenario_probabilities(r.macro_pattern, r.factory_pattern, mode);
  const ScenarioMix on_macro = scenario_probabilities(r.factory_pattern, r.macro_pattern, mode);
  for (Direction a : {Direction::Downlink, Direction::Uplink})
    for (Direction v : {Direction::Downlink, Direction::Uplink}) {
      r.cross_activity[idx(Network::Factory)][idx(a)][idx(v)] = on_factory.conditional(a, v);
      r.cross_activity[idx(Network::Macro)][idx(a)][idx(v)] = on_macro.conditional(a, v);
      double acir = 0.0;
      if (cfg.deployment == Deployment::AdjacentChannel)
        acir = cfg.acir_override_db ? *cfg.acir_override_db : scenario_acir(classify(a, v), cfg.acir);
      r.acir_db[idx(a)][idx(v)] = acir;
    }

  for (Direction d : {Direction::Downlink, Direction::Uplink})
    r.factory_latency_ok[idx(d)] =
        latency_feasibility(r.factory_pattern, d, cfg.qos.tti_us, cfg.processing_us, cfg.qos.latency_budget_us)
            .feasible;

  r.mcs = McsTable(cfg.shannon_gap_db);
  r.required_rate = coex::required_rate(cfg.qos);
  const double bw = cfg.bandwidth_hz();
  r.noise_mw[idx(Network::Macro)][kDl] = mw(noise_power(bw, cfg.macro.ue_noise_figure_db));
  r.noise_mw[idx(Network::Macro)][kUl] = mw(noise_power(bw, cfg.macro.bs_noise_figure_db));
  r.noise_mw[idx(Network::Factory)][kDl] = mw(noise_power(bw, cfg.factory.ue_noise_figure_db));
  r.noise_mw[idx(Network::Factory)][kUl] = mw(noise_power(bw, cfg.factory.bs_noise_figure_db));
  r.n_macro = static_cast<int>(r.layout.n_sectors());
  r.n_factory = 3;
  return r;
}

DropModel::DropModel(const ResolvedScenario& sc, std::size_t drop_index) : sc_(&sc), drop_index_(drop_index) {
  const ScenarioConfig& cfg = sc.cfg;
  const NetworkLayout& L = sc.layout;
  const std::uint64_t master = cfg.master_seed;
  const int n_m = sc.n_macro;
  const int n_f = sc.n_factory;
  const int n_c = sc.n_cells();
  const int n_sites = static_cast<int>(L.sites.size());

  Rng rng_u(derive_seed(master, drop_index, Stream::UrllcPositions));
  Rng rng_e(derive_seed(master, drop_index, Stream::EmbbPositions));
  Rng rng_p(derive_seed(master, drop_index, Stream::ProbePositions));
  urllc_pos_ = drop_users(L, static_cast<std::size_t>(cfg.urllc_samples), 0, rng_u, cfg.ue_height_m).urllc_users;
  embb_pos_ = drop_users(L, 0, static_cast<std::size_t>(cfg.embb_users), rng_e, cfg.ue_height_m).embb_users;
  n_regular_ = embb_pos_.size();
  for (auto& p : drop_ring_users(L, static_cast<std::size_t>(cfg.polygon_probe_users), cfg.polygon_margin_m, rng_p,
                                 cfg.ue_height_m))
    embb_pos_.push_back(p);

  const int n_u = static_cast<int>(urllc_pos_.size());
  const int n_e = static_cast<int>(embb_pos_.size());
  const int n_r = static_cast<int>(n_regular_);
  const std::uint64_t seed = derive_seed(master, drop_index, Stream::Drop);
  const PropagationParams prop = cfg.propagation_params();
  ClampCounter clamps;

  std::vector<Node> sites(static_cast<std::size_t>(n_sites));
  for (int s = 0; s < n_sites; ++s)
    sites[static_cast<std::size_t>(s)] = {NodeKind::MacroBs, static_cast<std::uint64_t>(s),
                                          {L.sites[static_cast<std::size_t>(s)].position, L.sites[static_cast<std::size_t>(s)].height}};
  const Node fbs{NodeKind::FactoryBs, kFactoryBsId, {L.factory.bs_position, L.factory.bs_height}};
  auto urllc_node = [&](int i) {
    return Node{NodeKind::UrllcUe, kUrllcIdBase + static_cast<std::uint64_t>(i), urllc_pos_[static_cast<std::size_t>(i)]};
  };
  auto embb_node = [&](int k) {
    return Node{NodeKind::EmbbUe, kEmbbIdBase + static_cast<std::uint64_t>(k), embb_pos_[static_cast<std::size_t>(k)]};
  };

  std::vector<ArrayConfig> arrays;
  for (int c = 0; c < n_m; ++c)
    arrays.push_back(cfg.macro_array(L.sites[static_cast<std::size_t>(c / 3)].sector_azimuth_deg[static_cast<std::size_t>(c % 3)]));
  for (int s = 0; s < n_f; ++s) arrays.push_back(cfg.factory_array(L.factory.bs_azimuth_deg[static_cast<std::size_t>(s)]));
  auto cell_node_pos = [&](int c) -> Position {
    return c < n_m ? sites[static_cast<std::size_t>(c / 3)].pos : fbs.pos;
  };
  // Gain of cell c's panel towards the image of `to` nearest to it.
  auto gain = [&](int c, const Position& to) {
    const Position from = cell_node_pos(c);
    const Vec2 img = L.image_near(to.xy, from.xy);
    return bs_gain_towards(arrays[static_cast<std::size_t>(c)], from.xyz(), at(img, to.height), LinkRole::Serving);
  };

  const double p_macro = cfg.macro.bs_tx_power_dbm;
  const double p_fac = cfg.factory.bs_tx_power_dbm;
  auto bo_ue = [&](int c) {
    return cfg.interf_beam_backoff_db ? *cfg.interf_beam_backoff_db : arrays[static_cast<std::size_t>(c)].array_gain_db();
  };
  const double bo_bb = cfg.bs_to_bs_backoff_db;
  const bool cross = !cfg.full_isolation;

  // Path loss per site (sectors share it) and gain per cell.
  Eigen::MatrixXd pl_mu(n_sites, n_u), g_mu(n_c, n_u);
  Eigen::VectorXd pl_fu(n_u);
  for (int i = 0; i < n_u; ++i) {
    const Node ue = urllc_node(i);
    pl_fu[i] = composite_pathloss(L, fbs, ue, prop, seed, &clamps).total;
    for (int s = 0; s < n_sites; ++s)
      pl_mu(s, i) = cross ? composite_pathloss(L, sites[static_cast<std::size_t>(s)], ue, prop, seed, &clamps).total : kInf;
    for (int c = 0; c < n_c; ++c) g_mu(c, i) = (c >= n_m || cross) ? gain(c, ue.pos) : 0.0;
  }
  Eigen::MatrixXd pl_me(n_sites, n_e), g_me(n_c, n_e);
  Eigen::VectorXd pl_fe(n_e);
  for (int k = 0; k < n_e; ++k) {
    const Node ue = embb_node(k);
    pl_fe[k] = cross ? composite_pathloss(L, fbs, ue, prop, seed, &clamps).total : kInf;
    for (int s = 0; s < n_sites; ++s)
      pl_me(s, k) = composite_pathloss(L, sites[static_cast<std::size_t>(s)], ue, prop, seed, &clamps).total;
    for (int c = 0; c < n_c; ++c) g_me(c, k) = (c < n_m || cross) ? gain(c, ue.pos) : 0.0;
  }
  Eigen::VectorXd pl_mf(n_sites);
  Eigen::MatrixXd g_bb(n_c, n_sites + 1);  // cell c towards site s, or towards the factory BS (last column)
  g_bb.setZero();
  for (int s = 0; s < n_sites; ++s)
    pl_mf[s] = cross ? composite_pathloss(L, sites[static_cast<std::size_t>(s)], fbs, prop, seed, &clamps).total : kInf;
  if (cross) {
    for (int c = 0; c < n_m; ++c) g_bb(c, n_sites) = gain(c, fbs.pos);
    for (int f = 0; f < n_f; ++f)
      for (int s = 0; s < n_sites; ++s) g_bb(n_m + f, s) = gain(n_m + f, sites[static_cast<std::size_t>(s)].pos);
  }

  // Association by strongest received power.
  std::vector<int> srv_u(static_cast<std::size_t>(n_u)), srv_e(static_cast<std::size_t>(n_e));
  factory_assoc_.assign(static_cast<std::size_t>(n_f), 0);
  for (int i = 0; i < n_u; ++i) {
    int best = n_m;
    for (int c = n_m + 1; c < n_c; ++c)
      if (g_mu(c, i) > g_mu(best, i)) best = c;
    srv_u[static_cast<std::size_t>(i)] = best;
    ++factory_assoc_[static_cast<std::size_t>(best - n_m)];
  }
  for (int k = 0; k < n_e; ++k) {
    int best = 0;
    double best_rx = -kInf;
    for (int c = 0; c < n_m; ++c) {
      const double rx = g_me(c, k) - pl_me(c / 3, k);
      if (rx > best_rx) {
        best_rx = rx;
        best = c;
      }
    }
    srv_e[static_cast<std::size_t>(k)] = best;
  }

  // Uplink powers.
  const auto pc_m = PowerControlParams::from_noise(cfg.macro.pc_alpha, cfg.macro.pc_target_snr_db,
                                                   cfg.macro.ue_tx_power_dbm,
                                                   noise_power(cfg.bandwidth_hz(), cfg.macro.bs_noise_figure_db));
  const auto pc_f = PowerControlParams::from_noise(cfg.factory.pc_alpha, cfg.factory.pc_target_snr_db,
                                                   cfg.factory.ue_tx_power_dbm,
                                                   noise_power(cfg.bandwidth_hz(), cfg.factory.bs_noise_figure_db));
  Eigen::VectorXd p_u(n_u), p_e(n_e);
  for (int i = 0; i < n_u; ++i) p_u[i] = uplink_tx_power(pl_fu[i], pc_f);
  for (int k = 0; k < n_e; ++k) p_e[k] = uplink_tx_power(pl_me(srv_e[static_cast<std::size_t>(k)] / 3, k), pc_m);

  // Served links.
  auto fill_links = [](ServedLinks& l, int n) {
    l.signal_mw.resize(n);
    l.serving.resize(static_cast<std::size_t>(n));
    l.row.resize(static_cast<std::size_t>(n));
  };
  fill_links(urllc_dl_links_, n_u);
  fill_links(urllc_ul_links_, n_u);
  for (int i = 0; i < n_u; ++i) {
    const int c = srv_u[static_cast<std::size_t>(i)];
    const double coupling = g_mu(c, i) - pl_fu[i];
    urllc_dl_links_.signal_mw[i] = mw(p_fac + coupling);
    urllc_ul_links_.signal_mw[i] = mw(p_u[i] + coupling);
    urllc_dl_links_.serving[static_cast<std::size_t>(i)] = urllc_ul_links_.serving[static_cast<std::size_t>(i)] = c;
    urllc_dl_links_.row[static_cast<std::size_t>(i)] = i;
    urllc_ul_links_.row[static_cast<std::size_t>(i)] = c - n_m;
  }
  fill_links(embb_dl_links_, n_e);
  fill_links(embb_ul_links_, n_r);
  for (int k = 0; k < n_e; ++k) {
    const int c = srv_e[static_cast<std::size_t>(k)];
    const double coupling = g_me(c, k) - pl_me(c / 3, k);
    embb_dl_links_.signal_mw[k] = mw(p_macro + coupling);
    embb_dl_links_.serving[static_cast<std::size_t>(k)] = c;
    embb_dl_links_.row[static_cast<std::size_t>(k)] = k;
    if (k < n_r) {
      embb_ul_links_.signal_mw[k] = mw(p_e[k] + coupling);
      embb_ul_links_.serving[static_cast<std::size_t>(k)] = c;
      embb_ul_links_.row[static_cast<std::size_t>(k)] = c;
    }
  }

  auto zero_table = [&](VictimTable& t, int rows) {
    t.bs = Eigen::MatrixXd::Zero(rows, n_c);
    t.ue_mean = Eigen::MatrixXd::Zero(rows, n_c);
    t.ue_max = Eigen::MatrixXd::Zero(rows, n_c);
  };
  zero_table(urllc_dl_, n_u);
  zero_table(factory_ul_, n_f);
  zero_table(embb_dl_, n_e);
  zero_table(macro_ul_, n_m);

  // Adds one UE's contribution to a population entry.
  std::vector<int> pop_count(static_cast<std::size_t>(n_c), 0);
  for (int k = 0; k < n_r; ++k) ++pop_count[static_cast<std::size_t>(srv_e[static_cast<std::size_t>(k)])];
  for (int i = 0; i < n_u; ++i) ++pop_count[static_cast<std::size_t>(srv_u[static_cast<std::size_t>(i)])];
  auto add_pop = [](VictimTable& t, int row, int cell, double rx_mw) {
    t.ue_mean(row, cell) += rx_mw;
    t.ue_max(row, cell) = std::max(t.ue_max(row, cell), rx_mw);
  };
  auto finish_pop = [&](VictimTable& t) {
    for (int c = 0; c < n_c; ++c)
      if (pop_count[static_cast<std::size_t>(c)] > 0) t.ue_mean.col(c) /= pop_count[static_cast<std::size_t>(c)];
  };

  // URLLC downlink victims.
  for (int i = 0; i < n_u; ++i) {
    const int own = srv_u[static_cast<std::size_t>(i)];
    for (int c = 0; c < n_m; ++c) urllc_dl_.bs(i, c) = mw(p_macro + g_mu(c, i) - bo_ue(c) - pl_mu(c / 3, i));
    for (int c = n_m; c < n_c; ++c)
      if (c != own) urllc_dl_.bs(i, c) = mw(p_fac + g_mu(c, i) - bo_ue(c) - pl_fu[i]);
  }
  // Factory uplink victims (one row per factory sector).
  for (int f = 0; f < n_f; ++f) {
    const int victim = n_m + f;
    for (int c = 0; c < n_m && cross; ++c)
      factory_ul_.bs(f, c) = mw(p_macro + g_bb(c, n_sites) + g_bb(victim, c / 3) - bo_bb - pl_mf[c / 3]);
    for (int k = 0; k < n_r && cross; ++k)
      add_pop(factory_ul_, f, srv_e[static_cast<std::size_t>(k)], mw(p_e[k] + g_me(victim, k) - bo_ue(victim) - pl_fe[k]));
    for (int i = 0; i < n_u; ++i) {
      const int c = srv_u[static_cast<std::size_t>(i)];
      if (c != victim) add_pop(factory_ul_, f, c, mw(p_u[i] + g_mu(victim, i) - bo_ue(victim) - pl_fu[i]));
    }
  }
  // eMBB downlink victims.
  for (int k = 0; k < n_e; ++k) {
    const int own = srv_e[static_cast<std::size_t>(k)];
    for (int c = 0; c < n_m; ++c)
      if (c != own) embb_dl_.bs(k, c) = mw(p_macro + g_me(c, k) - bo_ue(c) - pl_me(c / 3, k));
    for (int c = n_m; c < n_c && cross; ++c) embb_dl_.bs(k, c) = mw(p_fac + g_me(c, k) - bo_ue(c) - pl_fe[k]);
  }
  // Macro uplink victims.
  for (int m = 0; m < n_m; ++m) {
    for (int f = 0; f < n_f && cross; ++f)
      macro_ul_.bs(m, n_m + f) = mw(p_fac + g_bb(n_m + f, m / 3) + g_bb(m, n_sites) - bo_bb - pl_mf[m / 3]);
    for (int k = 0; k < n_r; ++k) {
      const int c = srv_e[static_cast<std::size_t>(k)];
      if (c != m) add_pop(macro_ul_, m, c, mw(p_e[k] + g_me(m, k) - bo_ue(m) - pl_me(m / 3, k)));
    }
    for (int i = 0; i < n_u && cross; ++i)
      add_pop(macro_ul_, m, srv_u[static_cast<std::size_t>(i)], mw(p_u[i] + g_mu(m, i) - bo_ue(m) - pl_mu(m / 3, i)));
  }
  // UE-to-UE: one path loss per (URLLC, eMBB) pair serves both directions.
  if (cross) {
    for (int i = 0; i < n_u; ++i) {
      const Node a = urllc_node(i);
      const int ci = srv_u[static_cast<std::size_t>(i)];
      for (int k = 0; k < n_e; ++k) {
        const double pl = composite_pathloss(L, a, embb_node(k), prop, seed, &clamps).total;
        if (k < n_r) add_pop(urllc_dl_, i, srv_e[static_cast<std::size_t>(k)], mw(p_e[k] - pl));
        add_pop(embb_dl_, k, ci, mw(p_u[i] - pl));
      }
    }
  }
  finish_pop(urllc_dl_);
  finish_pop(factory_ul_);
  finish_pop(embb_dl_);
  finish_pop(macro_ul_);
  clamped_ = clamps.clamped;
}

Eigen::VectorXd DropModel::weights(const DirectionalLoad& activity, Network victim, Direction aggressor_dir,
                                   Direction victim_dir, double extra_isolation_db) const {
  const ResolvedScenario& sc = *sc_;
  const int n_c = sc.n_cells();
  Eigen::VectorXd w(n_c);
  const double p_cross = sc.cross_activity[idx(victim)][idx(aggressor_dir)][idx(victim_dir)];
  const double iso = sc.cfg.full_isolation
                         ? 0.0
                         : db2lin(-(sc.acir_db[idx(aggressor_dir)][idx(victim_dir)] + extra_isolation_db));
  const auto& act = activity.of(aggressor_dir);
  for (int c = 0; c < n_c; ++c) {
    if (sc.network_of(c) == victim)
      w[c] = aggressor_dir == victim_dir ? act[c] : 0.0;
    else
      w[c] = p_cross * act[c] * iso;
  }
  return w;
}

Eigen::ArrayXd DropModel::link_sinr(const VictimTable& table, const ServedLinks& links, Network victim,
                                    Direction dir, const DirectionalLoad& activity, double extra_isolation_db,
                                    bool worst_case) const {
  const Eigen::VectorXd w_bs = weights(activity, victim, Direction::Downlink, dir, extra_isolation_db);
  const Eigen::VectorXd w_ue = weights(activity, victim, Direction::Uplink, dir, extra_isolation_db);
  const Eigen::VectorXd interference =
      aggregate_interference(table.bs, w_bs) + aggregate_interference(worst_case ? table.ue_max : table.ue_mean, w_ue);
  const double noise = sc_->noise_mw[idx(victim)][idx(dir)];
  const auto n = links.signal_mw.size();
  Eigen::ArrayXd rowwise(n);
  for (Eigen::Index k = 0; k < n; ++k) rowwise[k] = interference[links.row[static_cast<std::size_t>(k)]];
  return sinr_linear(links.signal_mw, noise, rowwise);
}

DirectionalLoad DropModel::capacity(const DirectionalLoad& u, double extra_isolation_db, bool macro_needed) const {
  const ResolvedScenario& sc = *sc_;
  const ScenarioConfig& cfg = sc.cfg;
  const int n_m = sc.n_macro;
  const int n_c = sc.n_cells();
  DirectionalLoad cap = DirectionalLoad::zeros(n_c);
  const double bw = cfg.bandwidth_hz();
  const bool harmonic = cfg.capacity_averaging == CapacityAveraging::Harmonic;

  auto aggregate = [&](const Eigen::ArrayXd& sinr, const ServedLinks& links, std::size_t n_users, Network net,
                       Direction d) {
    std::vector<double> acc(static_cast<std::size_t>(n_c), 0.0);
    std::vector<int> cnt(static_cast<std::size_t>(n_c), 0);
    double all_acc = 0.0;
    int all_cnt = 0;
    for (std::size_t k = 0; k < n_users; ++k) {
      const double r = achievable_rate(lin2db(sinr[static_cast<Eigen::Index>(k)]), bw, cfg.overhead, sc.mcs);
      const auto c = static_cast<std::size_t>(links.serving[k]);
      if (harmonic) {
        if (r <= 0.0) continue;
        acc[c] += 1.0 / r;
      } else {
        acc[c] += r;
      }
      ++cnt[c];
      all_acc += harmonic ? 1.0 / r : r;
      ++all_cnt;
    }
    auto mean_of = [&](double a, int n) { return n == 0 ? 0.0 : (harmonic ? n / a : a / n); };
    const double fallback = mean_of(all_acc, all_cnt);
    const int lo = net == Network::Macro ? 0 : n_m;
    const int hi = net == Network::Macro ? n_m : n_c;
    const double f = sc.fraction[idx(net)].of(d);
    for (int c = lo; c < hi; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      // A macro cell without any associated user takes the network-wide figure.
      const double m = cnt[cc] == 0 && net == Network::Macro ? fallback : mean_of(acc[cc], cnt[cc]);
      cap.of(d)[c] = f * m;
    }
  };

  for (Direction d : {Direction::Downlink, Direction::Uplink}) {
    const ServedLinks& ul = urllc_links(d);
    const Eigen::ArrayXd s = link_sinr(d == Direction::Downlink ? urllc_dl_ : factory_ul_, ul, Network::Factory, d, u,
                                       extra_isolation_db, false);
    aggregate(s, ul, ul.serving.size(), Network::Factory, d);
    if (macro_needed) {
      const ServedLinks& el = embb_links(d);
      const Eigen::ArrayXd se = link_sinr(d == Direction::Downlink ? embb_dl_ : macro_ul_, el, Network::Macro, d, u,
                                          extra_isolation_db, false);
      aggregate(se, el, n_regular_, Network::Macro, d);
    }
  }
  return cap;
}

DropEvaluation DropModel::evaluate(double urllc_arrival_density, double extra_isolation_db,
                                   bool with_embb_rates) const {
  const ResolvedScenario& sc = *sc_;
  const ScenarioConfig& cfg = sc.cfg;
  const int n_m = sc.n_macro;
  const int n_c = sc.n_cells();

  OfferedLoad load;
  load.urllc_arrival_density = urllc_arrival_density;
  load.embb_area_density = cfg.embb_area_density_mbps_km2 * 1e6;
  load.dl_share = cfg.dl_share;
  const DirectionalLoad offered = offered_cell_load(load, sc.layout, cfg.qos.payload_bits, factory_assoc_);

  DirectionalLoad pins;
  const DirectionalLoad* pinned = nullptr;
  if (cfg.macro_full_load) {
    pins = DirectionalLoad::zeros(n_c);
    pins.downlink.setConstant(std::numeric_limits<double>::quiet_NaN());
    pins.uplink.setConstant(std::numeric_limits<double>::quiet_NaN());
    pins.downlink.head(n_m).setOnes();
    pins.uplink.head(n_m).setOnes();
    pinned = &pins;
  }
  const bool macro_needed = !cfg.macro_full_load;
  CapacityFn fn = [&](const DirectionalLoad& u) { return capacity(u, extra_isolation_db, macro_needed); };

  DropEvaluation ev;
  ev.utilization = solve_load_coupling(offered, fn, DirectionalLoad::zeros(n_c), cfg.coupling, pinned);
  const DirectionalLoad& u = ev.utilization;

  const bool worst = cfg.reliability_sinr_mode == SinrMode::WorstCase;
  DirectionalLoad act = u;
  if (worst) {
    act.downlink = (u.downlink > 0.0).cast<double>();
    act.uplink = (u.uplink > 0.0).cast<double>();
  }
  const double bw = cfg.bandwidth_hz();
  for (Direction d : {Direction::Downlink, Direction::Uplink}) {
    const ServedLinks& l = urllc_links(d);
    const Eigen::ArrayXd s =
        link_sinr(d == Direction::Downlink ? urllc_dl_ : factory_ul_, l, Network::Factory, d, act, extra_isolation_db, worst);
    auto& ind = ev.indicators[static_cast<std::size_t>(idx(d))];
    ind.resize(l.serving.size());
    for (std::size_t i = 0; i < l.serving.size(); ++i) {
      const double rate = achievable_rate(lin2db(s[static_cast<Eigen::Index>(i)]), bw, cfg.overhead, sc.mcs);
      const bool rate_ok = rate > 0.0 && rate >= sc.required_rate;
      const bool load_ok = u.of(d)[l.serving[i]] < 1.0;
      ind[i] = rate_ok && load_ok && sc.factory_latency_ok[static_cast<std::size_t>(idx(d))] ? 1 : 0;
    }
  }

  if (with_embb_rates) {
    const Eigen::ArrayXd s_dl = link_sinr(embb_dl_, embb_dl_links_, Network::Macro, Direction::Downlink, u,
                                          extra_isolation_db, false);
    const Eigen::ArrayXd s_ul =
        link_sinr(macro_ul_, embb_ul_links_, Network::Macro, Direction::Uplink, u, extra_isolation_db, false);
    const DirectionFractions& f = sc.fraction[idx(Network::Macro)];
    ev.embb.resize(embb_pos_.size());
    for (std::size_t k = 0; k < embb_pos_.size(); ++k) {
      EmbbUserRate& r = ev.embb[k];
      r.xy = embb_pos_[k].xy;
      r.dl_rate = f.downlink * achievable_rate(lin2db(s_dl[static_cast<Eigen::Index>(k)]), bw, cfg.overhead, sc.mcs);
      if (k < n_regular_) {
        r.serving_cell = embb_dl_links_.serving[k];
        r.ul_rate = f.uplink * achievable_rate(lin2db(s_ul[static_cast<Eigen::Index>(k)]), bw, cfg.overhead, sc.mcs);
      } else {
        // Ring probes only feed the polygon statistic.
        r.serving_cell = -1;
        r.ul_rate = 0.0;
      }
    }
  }
  return ev;
}

DropResult summarize_drop(const ResolvedScenario& sc, const DropModel& model, const DropEvaluation& ev) {
  DropResult r;
  r.drop_index = model.drop_index();
  for (Direction d : {Direction::Downlink, Direction::Uplink}) {
    const int k = idx(d);
    r.availability[static_cast<std::size_t>(k)] = service_availability(ev.indicators[static_cast<std::size_t>(k)], d);
    const auto& u = ev.utilization.of(d);
    r.macro_utilization[static_cast<std::size_t>(k)] = u.head(sc.n_macro).mean();
    r.factory_utilization[static_cast<std::size_t>(k)] = u.tail(sc.n_factory).mean();
  }
  double sum_dl = 0.0, sum_ul = 0.0;
  const std::size_t n_r = model.regular_embb_users();
  for (std::size_t k = 0; k < n_r && k < ev.embb.size(); ++k) {
    sum_dl += ev.embb[k].dl_rate;
    sum_ul += ev.embb[k].ul_rate;
  }
  if (n_r > 0 && !ev.embb.empty()) {
    r.embb_mean_rate[kDl] = sum_dl / static_cast<double>(n_r);
    r.embb_mean_rate[kUl] = sum_ul / static_cast<double>(n_r);
  }
  r.polygon_dl = embb_rate_stats(ev.embb, sc.layout, RateRegion::PolygonAroundFactory, sc.cfg.polygon_margin_m);
  r.closest_sector_ul = embb_rate_stats(ev.embb, sc.layout, RateRegion::ClosestMacroSectorUplink);
  r.coupling_iterations = ev.utilization.iterations;
  r.converged = ev.utilization.converged;
  r.clamped_links = model.clamped_links();
  return r;
}

DropResult run_drop(const ResolvedScenario& sc, std::size_t drop_index) {
  try {
    const DropModel model(sc, drop_index);
    return summarize_drop(sc, model, model.evaluate(sc.cfg.urllc_arrival_density, sc.cfg.extra_isolation_db, true));
  } catch (const std::exception& e) {
    throw std::runtime_error("drop " + std::to_string(drop_index) + ": " + e.what());
  }
}

DropResult run_drop(const ScenarioConfig& cfg, std::size_t drop_index) {
  return run_drop(ResolvedScenario::resolve(cfg), drop_index);
}

CampaignResult run_campaign(const ScenarioConfig& cfg, const RunOptions& opts) {
  const ResolvedScenario sc = ResolvedScenario::resolve(cfg);
  const auto n = static_cast<std::size_t>(cfg.drops);
  std::vector<DropResult> slots(n);
  std::vector<std::uint8_t> ok(n, 0);
  std::vector<std::string> errors(n);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    try {
      slots[i] = run_drop(sc, i);
      ok[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  CampaignResult out;
  out.config = cfg;
  for (std::size_t i = 0; i < n; ++i) {
    if (ok[i])
      out.drops.push_back(slots[i]);
    else
      out.failed_drops.push_back(i);
  }
  if (out.failed_drops.size() * 100 > n || out.drops.empty())
    throw CampaignError(std::to_string(out.failed_drops.size()) + " of " + std::to_string(n) +
                        " drops failed; first: " + errors[out.failed_drops.front()]);

  auto row = [&](const std::string& dir, const std::string& metric, const std::vector<double>& v) {
    const MeanCi m = mean_ci95(v);
    out.rows.push_back({dir, metric, m.mean, m.ci95, m.n});
  };
  for (Direction d : {Direction::Downlink, Direction::Uplink}) {
    const auto k = static_cast<std::size_t>(idx(d));
    std::vector<double> avail, mu, fu, rate, region;
    for (const auto& r : out.drops) {
      avail.push_back(r.availability[k].availability);
      mu.push_back(r.macro_utilization[k]);
      fu.push_back(r.factory_utilization[k]);
      rate.push_back(r.embb_mean_rate[k]);
      const RateStats& st = d == Direction::Downlink ? r.polygon_dl : r.closest_sector_ul;
      if (!st.empty) region.push_back(st.mean);
    }
    const std::string ds = to_string(d);
    row(ds, "availability", avail);
    row(ds, "macro_utilization", mu);
    row(ds, "factory_utilization", fu);
    row(ds, "embb_rate_mean", rate);
    row(ds, d == Direction::Downlink ? "embb_rate_polygon" : "embb_rate_closest_sector", region);
  }
  std::vector<double> iters, nonconv, clamped;
  for (const auto& r : out.drops) {
    iters.push_back(r.coupling_iterations);
    nonconv.push_back(r.converged ? 0.0 : 1.0);
    clamped.push_back(static_cast<double>(r.clamped_links));
  }
  row("all", "coupling_iterations", iters);
  row("all", "coupling_nonconverged_share", nonconv);
  row("all", "clamped_links", clamped);
  out.rows.push_back({"all", "failed_drops", static_cast<double>(out.failed_drops.size()), 0.0, n});
  return out;
}

std::vector<DropModel> build_drop_models(const ResolvedScenario& sc, const RunOptions& opts) {
  const auto n = static_cast<std::size_t>(sc.cfg.drops);
  std::vector<std::optional<DropModel>> slots(n);
  parallel_for_checked(n, opts.threads, [&](std::size_t i) { slots[i].emplace(sc, i); });
  std::vector<DropModel> models;
  models.reserve(n);
  for (auto& s : slots) models.push_back(std::move(*s));
  return models;
}

std::array<double, 2> campaign_availability(const std::vector<DropModel>& models, double density,
                                            double extra_isolation_db, const RunOptions& opts) {
  std::vector<std::array<std::size_t, 2>> succ(models.size());
  std::vector<std::array<std::size_t, 2>> total(models.size());
  parallel_for_checked(models.size(), opts.threads, [&](std::size_t i) {
    const DropEvaluation ev = models[i].evaluate(density, extra_isolation_db, false);
    for (int d : {kDl, kUl}) {
      const auto& ind = ev.indicators[static_cast<std::size_t>(d)];
      std::size_t s = 0;
      for (auto x : ind) s += x;
      succ[i][static_cast<std::size_t>(d)] = s;
      total[i][static_cast<std::size_t>(d)] = ind.size();
    }
  });
  std::array<double, 2> out{};
  for (int d : {kDl, kUl}) {
    std::size_t s = 0, t = 0;
    for (std::size_t i = 0; i < models.size(); ++i) {
      s += succ[i][static_cast<std::size_t>(d)];
      t += total[i][static_cast<std::size_t>(d)];
    }
    out[static_cast<std::size_t>(d)] = t == 0 ? 0.0 : 100.0 * static_cast<double>(s) / static_cast<double>(t);
  }
  return out;
}

CapacitySearch capacity_search(const ScenarioConfig& cfg) {
  CapacitySearch s;
  s.lo = cfg.capacity_lo;
  s.hi = cfg.capacity_hi;
  s.tol = cfg.capacity_tol;
  s.target = cfg.availability_threshold_pct;
  return s;
}

std::array<CapacityResult, 2> campaign_capacity(const std::vector<DropModel>& models, const ScenarioConfig& cfg,
                                                double extra_isolation_db, const RunOptions& opts) {
  // Both searches share evaluations at common rates.
  std::map<double, std::array<double, 2>> memo;
  auto avail = [&](double rate) -> const std::array<double, 2>& {
    auto it = memo.find(rate);
    if (it == memo.end()) it = memo.emplace(rate, campaign_availability(models, rate, extra_isolation_db, opts)).first;
    return it->second;
  };
  const CapacitySearch search = capacity_search(cfg);
  std::array<CapacityResult, 2> out;
  for (Direction d : {Direction::Downlink, Direction::Uplink})
    out[static_cast<std::size_t>(idx(d))] =
        system_capacity([&](double r) { return avail(r)[static_cast<std::size_t>(idx(d))]; }, search, d);
  return out;
}

SweepResult sweep_isolation(const ScenarioConfig& cfg, const std::vector<double>& grid, const RunOptions& opts) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("isolation grid must be ascending");
  const ResolvedScenario sc = ResolvedScenario::resolve(cfg);
  const std::vector<DropModel> models = build_drop_models(sc, opts);
  SweepResult out;
  out.config = cfg;
  out.reference = campaign_capacity(models, cfg, kInf, opts);
  for (double iso : grid) {
    const auto caps = std::isinf(iso) ? out.reference : campaign_capacity(models, cfg, iso, opts);
    for (Direction d : {Direction::Downlink, Direction::Uplink}) {
      SweepPoint p;
      p.direction = d;
      p.isolation_db = iso;
      p.capacity = caps[static_cast<std::size_t>(idx(d))];
      const double ref = out.reference[static_cast<std::size_t>(idx(d))].capacity;
      p.relative = ref > 0.0 ? p.capacity.capacity / ref : std::numeric_limits<double>::quiet_NaN();
      out.points.push_back(p);
    }
  }
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  auto num = [&](const std::string& s) {
    if (s == "inf") return kInf;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw std::invalid_argument("bad grid value '" + s + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty grid entry in '" + spec + "'");
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(num(item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("grid range must be start:step:stop");
    const double a = num(item.substr(0, c1));
    const double step = num(item.substr(c1 + 1, c2 - c1 - 1));
    const double b = num(item.substr(c2 + 1));
    if (!(step > 0.0) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("bad grid range");
    for (long k = 0;; ++k) {
      const double v = a + static_cast<double>(k) * step;
      if (v > b + 1e-9 * step) break;
      out.push_back(v);
    }
  }
  if (out.empty()) throw std::invalid_argument("empty isolation grid");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0) throw std::invalid_argument("isolation grid values must be >= 0");
    if (i > 0 && !(out[i] > out[i - 1])) throw std::invalid_argument("isolation grid must be strictly ascending");
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::string prefix(const ScenarioConfig& c, const std::string& direction) {
  return c.scenario_id + "," + to_string(c.sync_mode) + "," + to_string(c.deployment) + "," + to_string(c.placement) +
         "," + direction;
}

}  // namespace

std::string campaign_csv(const CampaignResult& r) {
  std::string out = "scenario_id,sync_mode,deployment,placement,direction,metric,value,ci95,drops,seed\n";
  for (const auto& row : r.rows)
    out += prefix(r.config, row.direction) + "," + row.metric + "," + format_number(row.value) + "," +
           format_number(row.ci95) + "," + std::to_string(row.drops) + "," + std::to_string(r.config.master_seed) +
           "\n";
  return out;
}

std::string sweep_csv(const SweepResult& r) {
  std::string out = "scenario_id,sync_mode,deployment,placement,direction,isolation_db,metric,value,ci95,drops,seed\n";
  const std::string tail = ",0," + std::to_string(r.config.drops) + "," + std::to_string(r.config.master_seed) + "\n";
  for (const auto& p : r.points) {
    const std::string head = prefix(r.config, to_string(p.direction)) + "," + format_number(p.isolation_db) + ",";
    out += head + "capacity," + format_number(p.capacity.capacity) + tail;
    out += head + "relative_capacity," + format_number(p.relative) + tail;
  }
  return out;
}

std::string capacity_csv(const ScenarioConfig& cfg, const std::vector<CapacityResult>& caps) {
  std::string out = "scenario_id,sync_mode,deployment,placement,direction,metric,value,ci95,drops,seed\n";
  const std::string tail = ",0," + std::to_string(cfg.drops) + "," + std::to_string(cfg.master_seed) + "\n";
  for (const auto& c : caps) {
    const std::string head = prefix(cfg, to_string(c.direction)) + ",";
    out += head + "capacity," + format_number(c.capacity) + tail;
    out += head + "bracket_lo," + format_number(c.lo) + tail;
    out += head + "bracket_hi," + format_number(c.hi) + tail;
    out += head + "evaluations," + std::to_string(c.evaluations) + tail;
    out += head + "unsaturated," + std::string(c.unsaturated ? "1" : "0") + tail;
    out += head + "infeasible_at_lo," + std::string(c.infeasible_at_lo ? "1" : "0") + tail;
    out += head + "non_monotone," + std::string(c.non_monotone ? "1" : "0") + tail;
  }
  return out;
}

nlohmann::json provenance_json(const ScenarioConfig& cfg) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return {{"config", to_json(cfg)},
          {"provenance", {{"config_hash", hash}, {"seed", cfg.master_seed}, {"version", COEX_VERSION}}}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace coex
