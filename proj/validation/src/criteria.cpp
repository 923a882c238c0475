// SPDX-License-Identifier: Apache-2.0
//
// dpris - dual-polarized RIS-aided ISAC simulation and optimization toolkit
// Copyright (C) 2026 The dpris Authors
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
#include "dpris/validation/criteria.hpp"

#include "dpris/chanmodel.hpp"
#include "dpris/precopt.hpp"
#include "dpris/risopt.hpp"
#include "dpris/validation/oracles.hpp"
#include "dpris/wmmse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace dpris::validation {

namespace {

using experiments::format_double;
using experiments::Table;

struct Verdict {
  bool passed = false;
  std::string detail;
};

std::string num(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

/// Per-seed values of `value` grouped by the cells of `keys`, in row order.
std::map<std::vector<std::string>, std::vector<double>> group(const Table& t, const std::vector<std::string>& keys,
                                                              const std::string& value) {
  auto col = [&t](const std::string& name) {
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) throw std::logic_error("table has no column '" + name + "'");
    return static_cast<std::size_t>(it - t.header.begin());
  };
  std::vector<std::size_t> key_cols;
  for (const auto& k : keys) key_cols.push_back(col(k));
  const std::size_t vc = col(value);
  std::map<std::vector<std::string>, std::vector<double>> out;
  for (const auto& row : t.rows) {
    std::vector<std::string> key;
    for (auto c : key_cols) key.push_back(row[c]);
    out[key].push_back(std::stod(row[vc]));
  }
  return out;
}

const std::vector<double>& series(const std::map<std::vector<std::string>, std::vector<double>>& g,
                                  const std::vector<std::string>& key) {
  const auto it = g.find(key);
  if (it == g.end()) throw std::logic_error("missing sweep point");
  return it->second;
}

std::string key_of(Eigen::Index v) { return std::to_string(v); }

PrecoderSet random_precoders(Rng& rng, Eigen::Index ports, Eigen::Index streams, Eigen::Index users, double power) {
  PrecoderSet p;
  for (Eigen::Index k = 0; k < users; ++k) p.f.push_back(complex_gaussian(rng, ports, streams));
  const double s = std::sqrt(power / p.total_power());
  for (auto& f : p.f) f *= s;
  return p;
}

/// Random solver state: channels, phase, precoders and the matching (U, W).
struct SolverState {
  ChannelSet channels;
  RisPhase phase;
  PrecoderSet precoders;
  wmmse::WmmseState uw;
  double sigma2 = 1.0;
};

SolverState random_state(const Scenario& sc, std::uint64_t index) {
  auto rng = make_rng(sc.seed, index, Stream::probe);
  SolverState s;
  s.sigma2 = sc.noise_power();
  s.channels = chanmodel::generate_channels(rng, sc.channel_params(), sc.mode);
  s.phase = RisPhase::random(rng, s.channels.layout(), s.channels.ris_elements());
  std::uniform_real_distribution<double> frac(0.1, 1.0);
  s.precoders = random_precoders(rng, s.channels.bs_ports(), s.channels.ue_ports(), s.channels.users(), frac(rng) * sc.p0);
  s.uw = wmmse::update_state(metrics::compose_channels(s.channels, s.phase), s.precoders, s.sigma2);
  return s;
}

/// E_k expanded from its definition.
cmat oracle_mse(const cmat& h, const std::vector<cmat>& f, const cmat& u, double sigma2, std::size_t k) {
  const Eigen::Index d = f[k].cols();
  const cmat a = cmat::Identity(d, d) - u.adjoint() * h * f[k];
  cmat e = a * a.adjoint() + sigma2 * u.adjoint() * u;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (i != k) e += u.adjoint() * h * f[i] * f[i].adjoint() * h.adjoint() * u;
  return e;
}

// ---------------------------------------------------------------------------

Verdict rate_mse_identity(const Scenario& base, double& seconds_budget) {
  Scenario sc = base;
  sc.mode = ArrayMode::dual_polarized;
  sc.n_t = 2;
  sc.l = 2;
  sc.k = 2;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto s = random_state(sc, i);
    const auto eff = metrics::compose_channels(s.channels, s.phase);
    const auto mse = wmmse::mse_matrices(eff, s.precoders, s.uw.u, s.sigma2);
    const double obj = wmmse::wmmse_objective(s.uw.w, mse);
    const double rate = oracle::sum_rate(oracle::effective_channels(s.channels, s.phase), s.precoders.f, s.sigma2);
    worst = std::max(worst, std::abs(rate - obj));
  }
  seconds_budget = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < 1e-8 && seconds_budget < 5.0,
          "max |rate - wmmse| = " + num(worst) + " over 200 instances in " + num(seconds_budget, 3) + " s"};
}

Verdict quadratic_form_oracle(const Scenario& base, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_quad = 0.0, worst_lin = 0.0, worst_total = 0.0;
  for (ArrayMode mode : {ArrayMode::dual_polarized, ArrayMode::single_1x}) {
    Scenario sc = base;
    sc.mode = mode;
    sc.l = 3;
    for (int i = 0; i < 100; ++i) {
      const auto s = random_state(sc, i);
      const auto agg = risopt::phase_aggregates(s.channels, s.precoders, s.uw.u, s.uw.w, s.sigma2);
      const auto form = risopt::assemble_quadratic_form(agg.fbar, agg.c, agg.p, s.channels.layout(), sc.l,
                                                        agg.const_terms);
      const cvec& phi = s.phase.phi;
      const double quad = (phi.adjoint() * form.quad * phi)(0, 0).real();
      const cd lin = (form.lin.adjoint() * phi)(0, 0);
      worst_quad = std::max(worst_quad, rel_gap(quad, oracle::quadratic_trace(agg.fbar, agg.c, s.phase)));
      const cd ref = oracle::linear_trace(agg.p, s.phase);
      worst_lin = std::max(worst_lin, std::abs(lin - ref) / std::max(std::abs(ref), 1e-300));

      // The assembled form must reproduce sum_k tr(W_k E_k) at this phase.
      const auto h = oracle::effective_channels(s.channels, s.phase);
      double wsum = 0.0;
      for (std::size_t k = 0; k < h.size(); ++k)
        wsum += (s.uw.w[k] * oracle_mse(h[k], s.precoders.f, s.uw.u[k], s.sigma2, k)).trace().real();
      worst_total = std::max(worst_total, rel_gap(risopt::objective(form, phi) + form.const_terms, wsum));
    }
  }
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = worst_quad < 1e-9 && worst_lin < 1e-9 && worst_total < 1e-9 && seconds < 5.0;
  return {ok, "max relative gap quad " + num(worst_quad) + ", linear " + num(worst_lin) + ", total " +
                  num(worst_total) + " (200 instances, " + num(seconds, 3) + " s)"};
}

Verdict mm_majorization(const Scenario& base) {
  Scenario sc = base;
  sc.l = 4;
  double worst_dom = 0.0, worst_touch = 0.0, worst_rise = 0.0;
  int traces = 0;
  for (int i = 0; i < 100; ++i) {
    sc.mode = i % 2 ? ArrayMode::single_1x : ArrayMode::dual_polarized;
    const auto s = random_state(sc, 1000 + i);
    const auto form = risopt::build_quadratic_form(s.channels, s.precoders, s.uw.u, s.uw.w, s.sigma2);
    const double lam = risopt::lambda_max(form.quad);
    const double n = static_cast<double>(form.quad.rows());
    const double scale = std::max(lam * n + 2.0 * form.lin.norm() * std::sqrt(n), 1e-300);

    auto rng = make_rng(sc.seed, 1000 + i, Stream::init);
    const cvec phi_t = RisPhase::random(rng, s.channels.layout(), sc.l).phi;
    auto quad_at = [&form](const cvec& v) { return (v.adjoint() * form.quad * v)(0, 0).real(); };
    worst_touch = std::max(worst_touch, std::abs(risopt::surrogate(form, lam, phi_t, phi_t) - quad_at(phi_t)) / scale);
    for (int j = 0; j < 20; ++j) {
      const cvec phi = RisPhase::random(rng, s.channels.layout(), sc.l).phi;
      worst_dom = std::max(worst_dom, (quad_at(phi) - risopt::surrogate(form, lam, phi, phi_t)) / scale);
    }

    const RisPhase init{s.channels.layout(), sc.l, phi_t};
    const auto res = risopt::optimize_phase(init, form, base.solver.mm_tol, base.solver.mm_max_iter);
    double prev = risopt::objective(form, phi_t);
    for (double f : res.trace) {
      worst_rise = std::max(worst_rise, (f - prev) / scale);
      prev = f;
    }
    ++traces;
  }
  const bool ok = worst_dom <= 1e-10 && worst_touch <= 1e-10 && worst_rise <= 1e-10;
  return {ok, "surrogate deficit " + num(worst_dom) + ", touch gap " + num(worst_touch) + ", max trace rise " +
                  num(worst_rise) + " (relative, " + std::to_string(traces) + " seeds)"};
}

Verdict bisection_closed_form(const Scenario& base) {
  auto rng = make_rng(base.seed, 0, Stream::probe);
  std::uniform_real_distribution<double> log_ratio(std::log(0.05), std::log(200.0));
  std::uniform_real_distribution<double> log_p0(std::log(1e-3), std::log(1e3));
  double worst_tau = 0.0, worst_slack = 0.0, worst_primal = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double ratio = std::exp(log_ratio(rng));
    const double p0 = std::exp(log_p0(rng));
    auto f = random_precoders(rng, 12, 2, 3, ratio * p0).f;
    const double lambda = oracle::power(f);
    const auto xu = precopt::solve_x(f, p0);
    worst_tau = std::max(worst_tau, std::abs(xu.tau - oracle::power_multiplier(lambda, p0)));
    const double px = oracle::power(xu.x);
    worst_slack = std::max(worst_slack, xu.tau * std::abs(p0 - px) / p0);
    worst_primal = std::max(worst_primal, (px - p0) / p0);
  }
  const bool ok = worst_tau < 1e-6 && worst_slack < 1e-6 && worst_primal <= 1e-12;
  return {ok, "max |tau - closed form| = " + num(worst_tau) + ", slackness " + num(worst_slack) +
                  ", power excess " + num(worst_primal) + " (100 draws)"};
}

}  // namespace

// ---------------------------------------------------------------------------

void FeasibilityAudit::check(const Scenario& sc, const experiments::SolvedPoint& point) {
  ++checked;
  const auto& rep = point.report;
  auto violate = [this, &sc](const std::string& why) {
    ++violations;
    if (first_violation.empty()) first_violation = to_string(sc.mode) + " n_t=" + std::to_string(sc.n_t) + ": " + why;
  };
  if (rep.failed) {
    ++failures;
    violate("solver failure: " + rep.failure);
    return;
  }
  if (!rep.phase.unit_modulus(1e-9)) violate("phase leaves the unit circle");
  const auto h = oracle::effective_channels(point.channels, rep.phase);
  const double sigma2 = sc.noise_power();
  const double sr2 = sc.radar_noise_power();
  const double p = oracle::power(rep.precoders.f);
  const double g1 = oracle::radar_snr(point.channels.targets.vtil1, rep.precoders.f, sr2);
  const double g2 = oracle::radar_snr(point.channels.targets.vtil2, rep.precoders.f, sr2);
  const double rate = oracle::sum_rate(h, rep.precoders.f, sigma2);
  worst_mismatch = std::max({worst_mismatch, rel_gap(p, rep.power), rel_gap(g1, rep.gamma1), rel_gap(g2, rep.gamma2),
                             std::abs(rate - rep.sum_rate) / std::max(1.0, std::abs(rate))});
  if (p > sc.p0 * (1.0 + 1e-6)) violate("power " + num(p, 10) + " above budget");
  if (g1 < sc.gamma_th(1) * (1.0 - 1e-3)) violate("gamma1 " + num(g1) + " below threshold");
  if (g2 < sc.gamma_th(2) * (1.0 - 1e-3)) violate("gamma2 " + num(g2) + " below threshold");
}

Suite::Suite(SuiteOptions options) : opt_(std::move(options)) {}

const std::vector<int>& Suite::ids() {
  static const std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  return v;
}

const std::vector<int>& Suite::quick_ids() {
  static const std::vector<int> v{1, 2, 3, 4, 5, 6, 12};
  return v;
}

std::string Suite::title(int id) {
  switch (id) {
    case 1: return "rate-MSE identity";
    case 2: return "quadratic-form oracle";
    case 3: return "MM majorization and descent";
    case 4: return "power bisection vs closed form";
    case 5: return "penalty convergence";
    case 6: return "feasibility of reported solves";
    case 7: return "SP/DP ordering";
    case 8: return "sensing-rate tradeoff";
    case 9: return "beampattern lobes";
    case 10: return "phase quantization";
    case 11: return "XPD sweep";
    case 12: return "channel statistics";
    default: throw std::invalid_argument("unknown criterion " + std::to_string(id));
  }
}

void Suite::log(const std::string& line) const {
  if (opt_.progress) opt_.progress(line);
}

experiments::RunOptions Suite::run_options() {
  experiments::RunOptions ro;
  ro.n_seeds = opt_.seeds;
  ro.threads = opt_.threads;
  ro.on_solved = [this](const Scenario& sc, std::uint64_t, const experiments::SolvedPoint& p) { audit_.check(sc, p); };
  return ro;
}

namespace {

Verdict penalty_convergence(const Scenario& base, const experiments::RunOptions& ro, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = 5;
  std::vector<experiments::SolvedPoint> pts(n);
  experiments::parallel_for(n, ro.threads, [&](std::size_t i) { pts[i] = experiments::solve_point(base, i); });
  for (int i = 0; i < n; ++i) ro.on_solved(base, i, pts[i]);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  int ok_runs = 0, max_outer = 0;
  double worst = 0.0;
  std::size_t later = 0, later_ok = 0;
  for (const auto& p : pts) {
    const auto& its = p.report.iterations;
    if (its.empty()) continue;
    const auto& tr = its.front().penalty_trace;
    const double last = tr.empty() ? INFINITY : tr.back().residuals.max();
    worst = std::max(worst, last);
    max_outer = std::max(max_outer, static_cast<int>(tr.size()));
    if (its.front().penalty_converged && tr.size() <= 60 && last <= 1e-6) ++ok_runs;
    for (const auto& it : its) {
      ++later;
      later_ok += it.penalty_converged;
    }
  }
  const bool ok = ok_runs == n && seconds < 120.0;
  return {ok, std::to_string(ok_runs) + "/" + std::to_string(n) + " first penalty solves reach residuals <= 1e-6 (worst " +
                  num(worst) + ", max " + std::to_string(max_outer) + " outer); " + std::to_string(later_ok) + "/" +
                  std::to_string(later) + " of all AO penalty solves converge; " + num(seconds, 3) + " s"};
}

Verdict sp_dp_ordering(const experiments::Output& out) {
  const auto& t = out.file("sp_comparison.csv");
  const auto g = group(t, {"n_t", "mode"}, "sum_rate");
  bool ok = true;
  std::ostringstream os;
  for (Eigen::Index nt : {4, 6, 8, 10}) {
    const auto& s1 = series(g, {key_of(nt), "sp1x"});
    const auto& dp = series(g, {key_of(nt), "dp"});
    const auto& s2 = series(g, {key_of(nt), "sp2x"});
    const auto lo = experiments::paired_difference(dp, s1);
    const auto hi = experiments::paired_difference(s2, dp);
    const double ratio = experiments::summarize(dp).mean / experiments::summarize(s1).mean;
    const bool pt = lo.mean > 3.0 * lo.se && hi.mean > 3.0 * hi.se && ratio >= 1.4 && ratio <= 2.2;
    ok = ok && pt;
    os << "N_t=" << nt << (pt ? "" : "(x)") << " sp1x " << num(experiments::summarize(s1).mean) << " dp "
       << num(experiments::summarize(dp).mean) << " sp2x " << num(experiments::summarize(s2).mean)
       << " [dp-sp1x " << num(lo.mean / std::max(lo.se, 1e-300), 3) << " SE, sp2x-dp "
       << num(hi.mean / std::max(hi.se, 1e-300), 3) << " SE, ratio " << num(ratio, 3) << "]; ";
  }
  return {ok, os.str()};
}

Verdict tradeoff(const experiments::Output& out, const std::vector<double>& gammas) {
  const auto g = group(out.file("snr_tradeoff.csv"), {"gamma_th_db"}, "sum_rate");
  bool ok = true;
  std::ostringstream os;
  std::vector<double> means;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const auto& cur = series(g, {format_double(gammas[i])});
    means.push_back(experiments::summarize(cur).mean);
    os << num(gammas[i], 3) << " dB: " << num(means.back());
    if (i > 0) {
      const auto d = experiments::paired_difference(cur, series(g, {format_double(gammas[i - 1])}));
      const bool step = d.mean <= d.se;
      ok = ok && step;
      if (!step) os << " (rise " << num(d.mean) << " > SE " << num(d.se) << ")";
    }
    os << "; ";
  }
  const double drop = 1.0 - means.back() / means.front();
  ok = ok && drop >= 0.5;
  os << "drop " << num(100.0 * drop, 3) << "%";
  return {ok, os.str()};
}

struct Lobe {
  bool found = false;
  double angle = 0.0;
  double over_median_db = 0.0;
};

Lobe find_lobe(const Table& t, const std::string& column, double centre_deg) {
  const auto& h = t.header;
  const auto ai = std::find(h.begin(), h.end(), "angle_deg") - h.begin();
  const auto ci = std::find(h.begin(), h.end(), column) - h.begin();
  std::vector<double> ang, val;
  for (const auto& r : t.rows) {
    ang.push_back(std::stod(r[ai]));
    val.push_back(std::stod(r[ci]));
  }
  std::vector<double> sorted = val;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  Lobe best;
  for (std::size_t i = 1; i + 1 < val.size(); ++i) {
    if (std::abs(ang[i] - centre_deg) > 2.0 + 1e-9) continue;
    if (val[i] < val[i - 1] || val[i] < val[i + 1]) continue;
    const double db = 10.0 * std::log10(val[i] / std::max(median, 1e-300));
    if (!best.found || db > best.over_median_db) best = {true, ang[i], db};
  }
  return best;
}

Verdict beam_lobes(const experiments::Output& out, const Scenario& sc) {
  const auto& t = out.file("beampattern.csv");
  const double c1 = sc.geometry.target_angles[0] * 180.0 / kPi;
  const double c2 = sc.geometry.target_angles[1] * 180.0 / kPi;
  const auto v = find_lobe(t, "pv", c1);
  const auto h = find_lobe(t, "ph", c2);
  auto show = [](const char* name, const Lobe& l, double c) {
    if (!l.found) return std::string(name) + ": no local maximum within 2 deg of " + num(c, 3);
    return std::string(name) + " peak at " + num(l.angle, 4) + " deg, " + num(l.over_median_db, 3) + " dB over median";
  };
  const bool ok = v.found && h.found && v.over_median_db >= 10.0 && h.over_median_db >= 10.0;
  return {ok, show("pv", v, c1) + "; " + show("ph", h, c2)};
}

Verdict quantization(const experiments::Output& out, const experiments::SweepSpec& sw) {
  const auto g = group(out.file("quantization.csv"), {"n_t", "mode", "bits"}, "sum_rate");
  bool ok = true;
  std::ostringstream os;
  for (auto nt : sw.quantization_n_t)
    for (auto mode : sw.quantization_modes) {
      const std::string m = to_string(mode);
      const auto& cont = series(g, {key_of(nt), m, "0"});
      const auto& b1 = series(g, {key_of(nt), m, "1"});
      const auto& b3 = series(g, {key_of(nt), m, "3"});
      const auto& b4 = series(g, {key_of(nt), m, "4"});
      const double mc = experiments::summarize(cont).mean;
      const double gap = std::abs(experiments::summarize(b4).mean - mc) / mc;
      const auto d = experiments::paired_difference(b3, b1);
      const bool pt = gap <= 0.05 && d.mean > 2.0 * d.se;
      ok = ok && pt;
      os << m << " N_t=" << nt << (pt ? "" : "(x)") << " cont " << num(mc) << " M1 " << num(experiments::summarize(b1).mean)
         << " M3 " << num(experiments::summarize(b3).mean) << " M4 gap " << num(100 * gap, 3) << "%, M3-M1 "
         << num(d.mean / std::max(d.se, 1e-300), 3) << " SE; ";
    }
  return {ok, os.str()};
}

Verdict xpd(const experiments::Output& out, const experiments::SweepSpec& sw) {
  const auto g = group(out.file("xpd_sweep.csv"), {"l", "xpd_los_db"}, "sum_rate");
  bool ok = true;
  std::ostringstream os;
  for (auto l : sw.xpd_l) {
    os << "L=" << l << ":";
    for (std::size_t i = 0; i < sw.xpd_pairs.size(); ++i) {
      const auto& cur = series(g, {key_of(l), format_double(sw.xpd_pairs[i].first)});
      os << " " << num(experiments::summarize(cur).mean);
      if (i > 0) {
        const auto d =
            experiments::paired_difference(cur, series(g, {key_of(l), format_double(sw.xpd_pairs[i - 1].first)}));
        const bool step = d.mean > d.se;
        ok = ok && step;
        if (!step) os << "(x)";
      }
    }
    os << "; ";
  }
  return {ok, os.str()};
}

Verdict channel_statistics(const Scenario& base) {
  const auto params = base.channel_params();
  const auto& xp = params.xpd;
  auto rng = make_rng(base.seed, 0, Stream::probe);
  const int draws = 4000;
  const double omega = xp.rician_factor;
  const double pl = 1e-6;
  bool ok = true;
  std::ostringstream os;
  double worst_xpd = 0.0, worst_power = 0.0, worst_shared = 0.0, worst_los = 0.0;

  auto record_xpd = [&](const char* name, double empirical, double beta) {
    const double gap = rel_gap(empirical, oracle::configured_xpd(beta));
    worst_xpd = std::max(worst_xpd, gap);
    if (gap > 0.05) {
      ok = false;
      os << name << " XPD off by " << num(100 * gap, 3) << "%; ";
    }
  };
  auto shared_gap = [](const cmat& m) {
    const Eigen::Index r = m.rows() / 2, c = m.cols() / 2;
    return std::max((m.block(0, 0, r, c) - m.block(r, c, r, c)).cwiseAbs().maxCoeff(),
                    (m.block(0, c, r, c) - m.block(r, 0, r, c)).cwiseAbs().maxCoeff()) /
           std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  };

  // Rayleigh direct link.
  {
    oracle::PolarPower acc;
    for (int i = 0; i < draws; ++i) {
      const auto pp = oracle::polar_power(chanmodel::gen_direct_channel(rng, base.n_t, xp.beta1_nlos, pl));
      acc.co += pp.co;
      acc.cross += pp.cross;
    }
    record_xpd("direct", acc.xpd(), xp.beta1_nlos);
    const double per_entry = (acc.co + acc.cross) / (draws * 2.0 * base.n_t) / pl;
    worst_power = std::max(worst_power, std::abs(per_entry - 1.0));
  }

  // Rician links: NLoS-only and LoS-only families, then the mixture power.
  struct Family {
    const char* name;
    Eigen::Index rows, cols;
    double beta_los, beta_nlos;
    cmat los;
  };
  const std::vector<Family> fams{
      {"bs-ris", base.l, base.n_t, xp.beta2_los, xp.beta2_nlos,
       chanmodel::steering_vector(0.3, base.l, 0.5) * chanmodel::steering_vector(-0.2, base.n_t, 0.5).adjoint()},
      {"ris-ue", 1, base.l, xp.beta3_los, xp.beta3_nlos, chanmodel::steering_vector(0.7, base.l, 0.5).adjoint()}};
  for (const auto& f : fams) {
    oracle::PolarPower nl, mix;
    const cmat zero = cmat::Zero(f.rows, f.cols);
    for (int i = 0; i < draws; ++i) {
      const cmat a = chanmodel::gen_rician_dp_channel(rng, f.rows, f.cols, f.beta_los, f.beta_nlos, 0.0, zero, pl);
      const auto p = oracle::polar_power(a);
      nl.co += p.co;
      nl.cross += p.cross;
      const cmat b = chanmodel::gen_rician_dp_channel(rng, f.rows, f.cols, f.beta_los, f.beta_nlos, omega, f.los, pl);
      const auto q = oracle::polar_power(b);
      mix.co += q.co;
      mix.cross += q.cross;
      worst_shared = std::max({worst_shared, shared_gap(a), shared_gap(b)});
    }
    record_xpd((std::string(f.name) + " nlos").c_str(), nl.xpd(), f.beta_nlos);
    const cmat los_only =
        chanmodel::gen_rician_dp_channel(rng, f.rows, f.cols, f.beta_los, f.beta_nlos, 1e24, f.los, pl);
    record_xpd((std::string(f.name) + " los").c_str(), oracle::polar_power(los_only).xpd(), f.beta_los);
    // Co and cross blocks of the LoS part are scaled copies of one matrix.
    const Eigen::Index r = f.rows, c = f.cols;
    const cmat co = los_only.block(0, 0, r, c), cross = los_only.block(0, c, r, c);
    worst_los = std::max(worst_los, (cross - std::sqrt(f.beta_los / (1.0 - f.beta_los)) * co).cwiseAbs().maxCoeff() /
                                        co.cwiseAbs().maxCoeff());
    const double per_entry = (mix.co + mix.cross) / (draws * 2.0 * r * c) / pl;
    worst_power = std::max(worst_power, std::abs(per_entry - 1.0));
  }
  if (worst_power > 0.05) {
    ok = false;
    os << "power per polarization pair off by " << num(100 * worst_power, 3) << "%; ";
  }
  if (worst_shared > 1e-12 || worst_los > 1e-9) {
    ok = false;
    os << "shared-component gap " << num(worst_shared) << ", LoS proportionality gap " << num(worst_los) << "; ";
  }
  os << "worst XPD gap " << num(100 * worst_xpd, 3) << "%, worst power gap " << num(100 * worst_power, 3)
     << "%, shared-component gap " << num(worst_shared) << ", LoS proportionality gap " << num(worst_los);
  return {ok, os.str()};
}

}  // namespace

CriterionResult Suite::run(int id) {
  CriterionResult res;
  res.id = id;
  res.title = title(id);
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario& base = opt_.base;
  experiments::SweepSpec sw;
  Verdict v;
  double inner_seconds = 0.0;
  log("criterion " + std::to_string(id) + ": " + res.title);
  try {
    switch (id) {
      case 1: v = rate_mse_identity(base, inner_seconds); break;
      case 2: v = quadratic_form_oracle(base, inner_seconds); break;
      case 3: v = mm_majorization(base); break;
      case 4: v = bisection_closed_form(base); break;
      case 5: v = penalty_convergence(base, run_options(), inner_seconds); break;
      case 6: {
        const auto ro = run_options();
        const int n = std::min(opt_.seeds, 20);
        std::vector<std::pair<Scenario, std::uint64_t>> jobs;
        for (int s = 0; s < n; ++s) jobs.emplace_back(base, s);
        Scenario hard = base;
        hard.gamma1_th_db = hard.gamma2_th_db = 26.0;
        for (int s = 0; s < n / 2; ++s) jobs.emplace_back(hard, s);
        std::vector<experiments::SolvedPoint> pts(jobs.size());
        experiments::parallel_for(jobs.size(), ro.threads,
                                  [&](std::size_t i) { pts[i] = experiments::solve_point(jobs[i].first, jobs[i].second); });
        for (std::size_t i = 0; i < jobs.size(); ++i) ro.on_solved(jobs[i].first, jobs[i].second, pts[i]);
        const auto& a = audit_;
        v.passed = a.checked > 0 && a.violations == 0 && a.worst_mismatch <= 1e-8;
        v.detail = std::to_string(a.checked - a.violations) + "/" + std::to_string(a.checked) +
                   " solves feasible on recomputation, " + std::to_string(a.failures) +
                   " failures, worst reported-vs-recomputed gap " + num(a.worst_mismatch);
        if (!a.first_violation.empty()) v.detail += "; first violation: " + a.first_violation;
        break;
      }
      case 7: v = sp_dp_ordering(experiments::sp_comparison(base, sw, run_options())); break;
      case 8: {
        sw.tradeoff_n_t = {6};
        v = tradeoff(experiments::snr_tradeoff(base, sw, run_options()), sw.tradeoff_gamma_db);
        break;
      }
      case 9: v = beam_lobes(experiments::beampattern(base, sw, run_options()), base); break;
      case 10: v = quantization(experiments::quantization(base, sw, run_options()), sw); break;
      case 11: {
        sw.xpd_l = {10, 40};
        v = xpd(experiments::xpd_sweep(base, sw, run_options()), sw);
        break;
      }
      case 12: v = channel_statistics(base); break;
      default: throw std::invalid_argument("unknown criterion " + std::to_string(id));
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  res.passed = v.passed;
  res.detail = v.detail;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<CriterionResult> Suite::run_all(const std::vector<int>& ids) {
  std::vector<int> order;
  for (int id : ids)
    if (id != 6) order.push_back(id);
  if (std::find(ids.begin(), ids.end(), 6) != ids.end()) order.push_back(6);
  std::vector<CriterionResult> out;
  for (int id : order) {
    out.push_back(run(id));
    log(format_result(out.back()));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

std::string format_result(const CriterionResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ": " + r.detail +
         " (" + secs + " s)";
}

}  // namespace dpris::validation
