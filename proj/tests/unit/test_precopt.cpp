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
#include "dpris/precopt.hpp"

#include "dpris/scenario.hpp"
#include "dpris/solver.hpp"
#include "dpris/wmmse.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace dpris;
using precopt::PenaltyProblem;

std::vector<cmat> random_list(Rng& rng, int k, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  std::vector<cmat> out;
  for (int i = 0; i < k; ++i) out.push_back(scale * complex_gaussian(rng, rows, cols));
  return out;
}

/// Penalty problem of the default scenario at its initial point.
PenaltyProblem scenario_problem(std::uint64_t realization, std::vector<cmat>& f_init, double gamma_db = 20.0) {
  Scenario sc;
  sc.gamma1_th_db = sc.gamma2_th_db = gamma_db;
  auto rng = make_rng(sc.seed, realization, Stream::channels);
  const auto cs = chanmodel::generate_channels(rng, sc.channel_params(), sc.mode);
  auto irng = make_rng(sc.seed, realization, Stream::init);
  const auto init = solver::init_state(cs, sc.p0, irng);
  const auto eff = metrics::compose_channels(cs, init.phase);
  const auto st = wmmse::update_state(eff, init.precoders, sc.noise_power());
  const double sr = std::sqrt(sc.radar_noise_power());
  f_init = init.precoders.f;
  return {eff.h, st.u, st.w, cs.targets.vtil1 / sr, cs.targets.vtil2 / sr, sc.p0, sc.gamma_th(1), sc.gamma_th(2),
          sc.noise_power()};
}

PenaltyProblem random_problem(Rng& rng, int k = 2, Eigen::Index ports = 6) {
  PenaltyProblem p;
  p.h = random_list(rng, k, 2, ports);
  p.u = random_list(rng, k, 2, 2);
  for (int i = 0; i < k; ++i) {
    const cmat a = complex_gaussian(rng, 2, 2);
    p.w.push_back(a * a.adjoint() + cmat::Identity(2, 2));
  }
  p.vtil1 = complex_gaussian(rng, 3, ports);
  p.vtil2 = complex_gaussian(rng, 3, ports);
  p.p0 = 1.0;
  p.sense1 = p.sense2 = 2.0;
  p.sigma2 = 0.1;
  return p;
}

TEST(UpdateF, ZeroChannelsReturnX) {
  Rng rng(1);
  PenaltyProblem p;
  p.h = {cmat::Zero(2, 4), cmat::Zero(2, 4)};
  p.u = {cmat::Zero(2, 2), cmat::Zero(2, 2)};
  p.w = {cmat::Identity(2, 2), cmat::Identity(2, 2)};
  p.vtil1 = cmat::Zero(3, 4);
  p.vtil2 = cmat::Zero(3, 4);
  const auto x = random_list(rng, 2, 4, 2);
  const auto y = random_list(rng, 2, 3, 2);
  const auto f = precopt::update_f(p, x, y, y, 0.3);
  for (int k = 0; k < 2; ++k) EXPECT_LT((f[k] - x[k]).norm(), 1e-13);
}

TEST(UpdateF, ScalarHandSolution) {
  const double h = 0.8, u = 0.6, w = 1.5, x = 0.3, rho = 0.7;
  PenaltyProblem p;
  p.h = {cmat::Constant(1, 1, cd(h, 0))};
  p.u = {cmat::Constant(1, 1, cd(u, 0))};
  p.w = {cmat::Constant(1, 1, cd(w, 0))};
  p.vtil1 = cmat::Zero(1, 1);
  p.vtil2 = cmat::Zero(1, 1);
  const std::vector<cmat> xs{cmat::Constant(1, 1, cd(x, 0))}, zs{cmat::Zero(1, 1)};
  const auto f = precopt::update_f(p, xs, zs, zs, rho);
  const double ref = (2 * h * u * w + x / rho) / (2 * u * w * u * h * h + 1 / rho);
  EXPECT_NEAR(f[0](0, 0).real(), ref, 1e-14);
  EXPECT_NEAR(f[0](0, 0).imag(), 0.0, 1e-14);
}

TEST(UpdateF, StationaryUnderFiniteDifferences) {
  Rng rng(2);
  const auto p = random_problem(rng);
  const double rho = 0.4;
  const auto x = random_list(rng, 2, 6, 2);
  const auto y = random_list(rng, 2, 3, 2);
  const auto z = random_list(rng, 2, 3, 2);
  const auto f = precopt::update_f(p, x, y, z, rho);
  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 2; ++k)
    for (Eigen::Index i = 0; i < f[k].size(); ++i)
      for (cd dir : {cd(1, 0), cd(0, 1)}) {
        auto fp = f, fm = f;
        fp[k].data()[i] += h * dir;
        fm[k].data()[i] -= h * dir;
        const double d = (precopt::penalized_objective(p, fp, x, y, z, rho) -
                          precopt::penalized_objective(p, fm, x, y, z, rho)) /
                         (2 * h);
        worst = std::max(worst, std::abs(d));
      }
  EXPECT_LT(worst, 1e-6);
}

TEST(UpdateF, RejectsNonPositiveRho) {
  Rng rng(3);
  const auto p = random_problem(rng);
  const auto x = random_list(rng, 2, 6, 2);
  const auto y = random_list(rng, 2, 3, 2);
  EXPECT_THROW(precopt::update_f(p, x, y, y, 0.0), std::domain_error);
}

TEST(SolveX, InsideBallAndHandCase) {
  Rng rng(4);
  auto f = random_list(rng, 2, 4, 2);
  const double lam = frob2_sum(f);
  const auto in = precopt::solve_x(f, 2.0 * lam);
  EXPECT_EQ(in.tau, 0.0);
  EXPECT_EQ(in.x[0], f[0]);

  for (auto& m : f) m *= std::sqrt(4.0 / lam);
  const auto out = precopt::solve_x(f, 1.0);
  EXPECT_NEAR(out.tau, 1.0, 1e-9);
  EXPECT_LT((out.x[1] - f[1] / 2.0).norm(), 1e-9);
}

TEST(SolveX, ClosedFormAndKkt) {
  Rng rng(5);
  std::uniform_real_distribution<double> ratio(0.1, 50.0);
  for (int t = 0; t < 100; ++t) {
    const double r = ratio(rng);
    auto f = random_list(rng, 3, 5, 2);
    const double lam = frob2_sum(f);
    const double p0 = lam / r;
    const auto xu = precopt::solve_x(f, p0);
    EXPECT_NEAR(xu.tau, std::max(0.0, std::sqrt(r) - 1.0), 1e-6);
    EXPECT_GE(xu.tau, 0.0);
    EXPECT_LE(frob2_sum(xu.x), p0 * (1 + 1e-12));
    for (std::size_t k = 0; k < f.size(); ++k)
      EXPECT_LT((2.0 * (xu.x[k] - f[k]) + 2.0 * xu.tau * xu.x[k]).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(SolveY, InactiveAndHandCase) {
  Rng rng(6);
  const cmat v = complex_gaussian(rng, 3, 4);
  auto f = random_list(rng, 2, 4, 2);
  double s = 0.0;
  for (const auto& m : f) s += (v * m).squaredNorm();
  const auto in = precopt::solve_y(f, v, 0.5 * s, 1.0);
  EXPECT_EQ(in.mu, 0.0);
  EXPECT_EQ(in.y[0], v * f[0]);

  for (auto& m : f) m /= std::sqrt(s);
  const auto act = precopt::solve_y(f, v, 4.0, 1.0);
  EXPECT_NEAR(act.mu, 0.5, 1e-9);
  EXPECT_LT((act.y[1] - 2.0 * v * f[1]).norm(), 1e-8);
}

TEST(SolveY, ActiveConstraintAndKkt) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const cmat v = complex_gaussian(rng, 3, 6);
    const auto f = random_list(rng, 2, 6, 2, 0.1);
    double s = 0.0;
    for (const auto& m : f) s += (v * m).squaredNorm();
    const double target = s * (2.0 + t);
    const auto r = precopt::solve_y(f, v, target, 1.0);
    EXPECT_GE(r.mu, 0.0);
    EXPECT_LT(r.mu, 1.0);
    EXPECT_NEAR(frob2_sum(r.y) / target, 1.0, 1e-6);
    for (std::size_t k = 0; k < f.size(); ++k)
      EXPECT_LT(((1.0 - r.mu) * r.y[k] - v * f[k]).cwiseAbs().maxCoeff(), 1e-6 * r.y[k].cwiseAbs().maxCoeff());
  }
  const cmat v = complex_gaussian(rng, 3, 6);
  const auto f = random_list(rng, 2, 6, 2);
  const auto huge = precopt::solve_y(f, v, 1e12, 1.0);
  EXPECT_LT(huge.mu, 1.0);
  EXPECT_GT(huge.mu, 0.99);
}

TEST(SolveY, ZeroEnergyIsInfeasible) {
  Rng rng(8);
  const std::vector<cmat> f{cmat::Zero(4, 2)};
  EXPECT_THROW(precopt::solve_y(f, complex_gaussian(rng, 3, 4), 1.0, 1.0), precopt::InfeasibleDirection);
}

TEST(SolveZ, SameAsSolveY) {
  Rng rng(9);
  const cmat v = complex_gaussian(rng, 3, 4);
  const auto f = random_list(rng, 2, 4, 2, 0.05);
  const auto a = precopt::solve_y(f, v, 3.0, 0.5);
  const auto b = precopt::solve_z(f, v, 3.0, 0.5);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.y[0], b.y[0]);
}

TEST(PenaltySolve, TrivialContextConverges) {
  Rng rng(10);
  auto p = random_problem(rng);
  p.sense1 = p.sense2 = 0.0;
  auto f = random_list(rng, 2, 6, 2);
  const double s = std::sqrt(0.5 / frob2_sum(f));
  for (auto& m : f) m *= s;
  const auto r = precopt::penalty_solve(f, p);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.feasible);
  EXPECT_LT(r.trace.back().residuals.max(), 1e-6);
}

TEST(PenaltySolve, DefaultsConvergeOnScenarioInstances) {
  for (std::uint64_t i = 0; i < 3; ++i) {
    std::vector<cmat> f0;
    const auto p = scenario_problem(i, f0);
    const auto r = precopt::penalty_solve(f0, p);
    ASSERT_FALSE(r.trace.empty());
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.trace.size(), 60u);
    EXPECT_LE(r.trace.back().residuals.max(), 1e-6);
    EXPECT_TRUE(r.feasible);
    PrecoderSet prec{r.f};
    EXPECT_LE(prec.total_power(), p.p0 * (1 + 1e-6));
    EXPECT_GE(metrics::radar_snr(prec, p.vtil1, 1.0), p.sense1 * (1 - 1e-6));
    EXPECT_GE(metrics::radar_snr(prec, p.vtil2, 1.0), p.sense2 * (1 - 1e-6));
    for (const auto& rec : r.trace) {
      EXPECT_GE(rec.tau, 0.0);
      EXPECT_GE(rec.mu1, 0.0);
      EXPECT_LT(rec.mu1, 1.0);
      EXPECT_LT(rec.mu2, 1.0);
    }
  }
}

TEST(PenaltySolve, ResidualDecayOnceRhoIsSmall) {
  std::vector<cmat> f0;
  const auto p = scenario_problem(4, f0, 24.0);
  const auto r = precopt::penalty_solve(f0, p);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    if (r.trace[i - 1].rho >= 0.1) continue;
    EXPECT_LE(r.trace[i].residuals.max(), 1.1 * r.trace[i - 1].residuals.max()) << "outer " << i;
  }
}

TEST(PenaltySolve, BlockUpdatesDescend) {
  Rng rng(11);
  const auto p = random_problem(rng);
  const double rho = 0.5;
  auto f = random_list(rng, 2, 6, 2);
  auto x = f;
  std::vector<cmat> y, z;
  for (const auto& m : f) {
    y.push_back(p.vtil1 * m);
    z.push_back(p.vtil2 * m);
  }
  auto obj = [&] { return precopt::penalized_objective(p, f, x, y, z, rho); };
  double prev = obj();
  for (int pass = 0; pass < 10; ++pass) {
    f = precopt::update_f(p, x, y, z, rho);
    EXPECT_LE(obj(), prev + 1e-9 * std::abs(prev));
    prev = obj();
    x = precopt::solve_x(f, p.p0).x;
    EXPECT_LE(obj(), prev + 1e-9 * std::abs(prev));
    prev = obj();
    y = precopt::solve_y(f, p.vtil1, p.sense1, 1.0).y;
    EXPECT_LE(obj(), prev + 1e-9 * std::abs(prev));
    prev = obj();
    z = precopt::solve_z(f, p.vtil2, p.sense2, 1.0).y;
    EXPECT_LE(obj(), prev + 1e-9 * std::abs(prev));
    prev = obj();
  }
}

TEST(PenaltySolve, ValidatesOptions) {
  Rng rng(12);
  const auto p = random_problem(rng);
  const auto f = random_list(rng, 2, 6, 2);
  precopt::PenaltyOptions bad;
  bad.c = 1.0;
  EXPECT_THROW(precopt::penalty_solve(f, p, bad), std::domain_error);
  bad = {};
  bad.rho0 = -1.0;
  EXPECT_THROW(precopt::penalty_solve(f, p, bad), std::domain_error);
}

}  // namespace
