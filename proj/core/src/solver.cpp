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
#include "dpris/solver.hpp"

#include "dpris/risopt.hpp"
#include "dpris/wmmse.hpp"

#include <chrono>
#include <cmath>
#include <nlohmann/json.hpp>

namespace dpris::solver {

namespace {

double precoder_distance(const PrecoderSet& a, const PrecoderSet& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.f.size(); ++k) acc += (a.f[k] - b.f[k]).squaredNorm();
  return std::sqrt(acc);
}

nlohmann::json matrix_json(const cmat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json residuals_json(const precopt::Residuals& r) { return {{"x", r.x}, {"y", r.y}, {"z", r.z}}; }

}  // namespace

AoConfig make_config(const Scenario& scenario) {
  AoConfig c;
  c.p0 = scenario.p0;
  c.sigma2 = scenario.noise_power();
  c.sense = scenario.sense_spec();
  c.settings = scenario.solver;
  return c;
}

InitState init_state(const ChannelSet& channels, double p0, Rng& rng) {
  InitState init;
  init.phase = RisPhase::random(rng, channels.layout(), channels.ris_elements());
  const auto eff = metrics::compose_channels(channels, init.phase);
  const Eigen::Index n = channels.bs_ports();
  for (const auto& h : eff.h) {
    cmat f = h.adjoint();
    if (f.squaredNorm() == 0.0) f = cmat::Identity(n, h.rows());
    init.precoders.f.push_back(std::move(f));
  }
  const double power = init.precoders.total_power();
  if (power > 0.0) {
    const double s = std::sqrt(p0 / power);
    for (auto& f : init.precoders.f) f *= s;
  }
  return init;
}

std::vector<double> SolveReport::sum_rate_trace() const {
  std::vector<double> out;
  out.reserve(iterations.size());
  for (const auto& it : iterations) out.push_back(it.sum_rate);
  return out;
}

bool report_feasible(double power, double gamma1, double gamma2, const AoConfig& config) {
  return power <= config.p0 * (1.0 + 1e-6) && gamma1 >= config.sense.gamma1_th * (1.0 - 1e-3) &&
         gamma2 >= config.sense.gamma2_th * (1.0 - 1e-3);
}

SolveReport alternating_optimize(const ChannelSet& channels, const AoConfig& config, const InitState& init) {
  const auto start = std::chrono::steady_clock::now();
  const auto& st = config.settings;
  const auto& sense = config.sense;
  const double sigma_r = std::sqrt(sense.sigma_r2);
  const cmat vtil1 = channels.targets.vtil1 / sigma_r;
  const cmat vtil2 = channels.targets.vtil2 / sigma_r;

  SolveReport rep;
  PrecoderSet prec = init.precoders;
  RisPhase phase = init.phase;
  cmat phi_mat = metrics::expand_phase(phase);
  EffectiveChannels eff = metrics::compose_channels(channels, phase);

  // The penalty step is approximate, so the trace is not monotone. The report
  // carries the best feasible iterate.
  double best_rate = -1.0;
  InitState best;
  EffectiveChannels best_eff;

  try {
    rep.initial_sum_rate = metrics::sum_rate(eff, prec, config.sigma2);
    for (int n = 1; n <= st.ao_max_iter; ++n) {
      IterationRecord rec;
      rec.iteration = n;

      const auto state = wmmse::update_state(eff, prec, config.sigma2);

      risopt::MmResult mm{phase, {}, 0, true};
      if (config.optimize_phase) {
        const auto form = risopt::build_quadratic_form(channels, prec, state.u, state.w, config.sigma2);
        mm = risopt::optimize_phase(phase, form, st.mm_tol, st.mm_max_iter);
      }
      rec.mm_iterations = mm.iterations;
      rec.mm_converged = mm.converged;
      const cmat phi_next = metrics::expand_phase(mm.phase);
      eff = metrics::compose_channels(channels, mm.phase);

      precopt::PenaltyProblem problem{eff.h, state.u, state.w, vtil1, vtil2, config.p0, sense.gamma1_th,
                                      sense.gamma2_th, config.sigma2};
      auto pen = precopt::penalty_solve(prec.f, problem, st.penalty);
      PrecoderSet next{std::move(pen.f)};

      rec.delta = std::max((phi_next - phi_mat).norm(), precoder_distance(next, prec));
      rec.penalty_outer = static_cast<int>(pen.trace.size());
      rec.penalty_converged = pen.converged;
      if (!pen.trace.empty()) rec.residuals = pen.trace.back().residuals;
      rec.penalty_trace = std::move(pen.trace);

      phase = std::move(mm.phase);
      phi_mat = phi_next;
      prec = std::move(next);

      rec.sum_rate = metrics::sum_rate(eff, prec, config.sigma2);
      rec.wmmse_objective =
          wmmse::wmmse_objective(state.w, wmmse::mse_matrices(eff, prec, state.u, config.sigma2));
      rec.power = prec.total_power();
      rec.gamma1 = metrics::radar_snr(prec, channels.targets.vtil1, sense.sigma_r2);
      rec.gamma2 = metrics::radar_snr(prec, channels.targets.vtil2, sense.sigma_r2);
      if (report_feasible(rec.power, rec.gamma1, rec.gamma2, config) && rec.sum_rate > best_rate) {
        best_rate = rec.sum_rate;
        best = {prec, phase};
        best_eff = eff;
        rep.best_iteration = n;
      }
      rep.iterations.push_back(std::move(rec));

      if (rep.iterations.back().delta < st.ao_eps) {
        rep.converged = true;
        break;
      }
    }
  } catch (const std::exception& e) {
    rep.failed = true;
    rep.failure = e.what();
  }

  if (rep.best_iteration > 0) {
    prec = std::move(best.precoders);
    phase = std::move(best.phase);
    eff = std::move(best_eff);
  }
  rep.phase = phase;
  rep.precoders = prec;
  rep.sum_rate = metrics::sum_rate(eff, prec, config.sigma2);
  rep.power = prec.total_power();
  rep.gamma1 = metrics::radar_snr(prec, channels.targets.vtil1, sense.sigma_r2);
  rep.gamma2 = metrics::radar_snr(prec, channels.targets.vtil2, sense.sigma_r2);
  rep.power_slack = config.p0 - rep.power;
  rep.gamma1_slack = rep.gamma1 - sense.gamma1_th;
  rep.gamma2_slack = rep.gamma2 - sense.gamma2_th;
  rep.feasible = report_feasible(rep.power, rep.gamma1, rep.gamma2, config);
  if (!rep.feasible && !rep.failed) {
    rep.failed = true;
    rep.failure = "final iterate violates the power or sensing constraints";
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SolveReport solve_realization(const Scenario& scenario, std::uint64_t realization) {
  auto rng = make_rng(scenario.seed, realization, Stream::channels);
  const auto channels = chanmodel::generate_channels(rng, scenario.channel_params(), scenario.mode);
  auto init_rng = make_rng(scenario.seed, realization, Stream::init);
  const auto init = init_state(channels, scenario.p0, init_rng);
  return alternating_optimize(channels, make_config(scenario), init);
}

std::string report_json(const SolveReport& rep, const Scenario& scenario, std::uint64_t realization,
                        bool timing) {
  using nlohmann::json;
  json j;
  j["mode"] = to_string(scenario.mode);
  j["seed"] = scenario.seed;
  j["realization"] = realization;
  j["initial_sum_rate"] = rep.initial_sum_rate;
  j["sum_rate"] = rep.sum_rate;
  j["power"] = rep.power;
  j["gamma1"] = rep.gamma1;
  j["gamma2"] = rep.gamma2;
  j["slacks"] = {{"power", rep.power_slack}, {"gamma1", rep.gamma1_slack}, {"gamma2", rep.gamma2_slack}};
  j["best_iteration"] = rep.best_iteration;
  j["converged"] = rep.converged;
  j["feasible"] = rep.feasible;
  j["failed"] = rep.failed;
  if (rep.failed) j["failure"] = rep.failure;
  if (timing) j["wall_seconds"] = rep.wall_seconds;

  json iters = json::array();
  for (const auto& it : rep.iterations) {
    json penalty = json::array();
    for (const auto& p : it.penalty_trace)
      penalty.push_back({{"rho", p.rho},
                         {"residuals", residuals_json(p.residuals)},
                         {"objective", p.objective},
                         {"inner_iterations", p.inner_iterations},
                         {"tau", p.tau},
                         {"mu1", p.mu1},
                         {"mu2", p.mu2}});
    iters.push_back({{"iteration", it.iteration},
                     {"sum_rate", it.sum_rate},
                     {"wmmse_objective", it.wmmse_objective},
                     {"delta", it.delta},
                     {"mm_iterations", it.mm_iterations},
                     {"mm_converged", it.mm_converged},
                     {"penalty_outer", it.penalty_outer},
                     {"penalty_converged", it.penalty_converged},
                     {"residuals", residuals_json(it.residuals)},
                     {"power", it.power},
                     {"gamma1", it.gamma1},
                     {"gamma2", it.gamma2},
                     {"penalty", std::move(penalty)}});
  }
  j["iterations"] = std::move(iters);

  json phi = json::array();
  for (Eigen::Index i = 0; i < rep.phase.phi.size(); ++i) phi.push_back(std::arg(rep.phase.phi(i)));
  j["phase_angles"] = std::move(phi);
  json f = json::array();
  for (const auto& fk : rep.precoders.f) f.push_back(matrix_json(fk));
  j["precoders"] = std::move(f);
  return j.dump(2);
}

}  // namespace dpris::solver
