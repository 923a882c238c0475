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

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>

namespace {

using namespace dpris;

ChannelSet default_channels(const Scenario& sc, std::uint64_t realization) {
  auto rng = make_rng(sc.seed, realization, Stream::channels);
  return chanmodel::generate_channels(rng, sc.channel_params(), sc.mode);
}

TEST(InitState, PowerPhaseAndDeterminism) {
  const Scenario sc;
  const auto cs = default_channels(sc, 0);
  auto r1 = make_rng(sc.seed, 0, Stream::init);
  auto r2 = make_rng(sc.seed, 0, Stream::init);
  const auto a = solver::init_state(cs, 0.7, r1);
  const auto b = solver::init_state(cs, 0.7, r2);
  EXPECT_NEAR(a.precoders.total_power(), 0.7, 1e-12);
  EXPECT_TRUE(a.phase.unit_modulus(1e-12));
  EXPECT_EQ(a.phase.phi, b.phase.phi);
  for (std::size_t k = 0; k < a.precoders.f.size(); ++k) EXPECT_EQ(a.precoders.f[k], b.precoders.f[k]);
}

TEST(AlternatingOptimize, ZeroChannelsStopAtOnce) {
  ChannelSet cs;
  cs.mode = ArrayMode::dual_polarized;
  const Eigen::Index nt = 2, l = 2;
  for (int k = 0; k < 2; ++k) {
    cs.h_d.push_back(cmat::Zero(2, 2 * nt));
    cs.h_r.push_back(cmat::Zero(2, 2 * l));
  }
  cs.g = cmat::Zero(2 * l, 2 * nt);
  cs.targets.vtil1 = cs.targets.vtil2 = cmat::Zero(3, 2 * nt);
  Rng rng(1);
  const auto init = solver::init_state(cs, 1.0, rng);
  solver::AoConfig cfg;
  cfg.sense = {0.0, 0.0, 1.0};
  const auto rep = solver::alternating_optimize(cs, cfg, init);
  EXPECT_FALSE(rep.failed) << rep.failure;
  EXPECT_EQ(rep.iterations.size(), 1u);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.sum_rate, 0.0);
}

class DefaultSolve : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(DefaultSolve, FeasibleConsistentAndQuasiMonotone) {
  const Scenario sc;
  const auto cs = default_channels(sc, GetParam());
  const auto rep = solver::solve_realization(sc, GetParam());
  ASSERT_FALSE(rep.failed) << rep.failure;
  EXPECT_TRUE(rep.feasible);
  EXPECT_GE(rep.best_iteration, 1);

  // Slacks and rate against a fresh evaluation of the reported point.
  const auto eff = metrics::compose_channels(cs, rep.phase);
  const double sigma2 = sc.noise_power();
  EXPECT_NEAR(metrics::sum_rate(eff, rep.precoders, sigma2), rep.sum_rate, 1e-8);
  EXPECT_NEAR(sc.p0 - rep.precoders.total_power(), rep.power_slack, 1e-8);
  const double g1 = metrics::radar_snr(rep.precoders, cs.targets.vtil1, sc.radar_noise_power());
  EXPECT_NEAR((g1 - sc.gamma_th(1)) / sc.gamma_th(1), rep.gamma1_slack / sc.gamma_th(1), 1e-8);
  EXPECT_GE(rep.gamma1, sc.gamma_th(1) * (1 - 1e-3));
  EXPECT_GE(rep.gamma2, sc.gamma_th(2) * (1 - 1e-3));
  EXPECT_LE(rep.power, sc.p0 * (1 + 1e-6));

  const auto trace = rep.sum_rate_trace();
  ASSERT_EQ(trace.size(), rep.iterations.size());
  EXPECT_GE(rep.sum_rate, trace.front());
  double best = -1.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i < 10) best = std::max(best, trace[i]);
  }
  // Fast convergence: the best rate of the first ten iterations is within 3% of the reported one.
  EXPECT_GE(best, 0.97 * rep.sum_rate);
}

INSTANTIATE_TEST_SUITE_P(Realizations, DefaultSolve, ::testing::Values(0u, 1u, 2u, 3u));

TEST(AlternatingOptimize, SinglePolarizedModesSolve) {
  for (auto mode : {ArrayMode::single_1x, ArrayMode::single_2x}) {
    Scenario sc;
    sc.mode = mode;
    const auto rep = solver::solve_realization(sc, 0);
    EXPECT_FALSE(rep.failed) << to_string(mode) << ": " << rep.failure;
    EXPECT_TRUE(rep.feasible);
    EXPECT_GT(rep.sum_rate, 0.0);
  }
}

TEST(AlternatingOptimize, FixedPhaseKeepsPhase) {
  const Scenario sc;
  const auto cs = default_channels(sc, 5);
  auto rng = make_rng(sc.seed, 5, Stream::init);
  const auto init = solver::init_state(cs, sc.p0, rng);
  auto cfg = solver::make_config(sc);
  cfg.optimize_phase = false;
  const auto rep = solver::alternating_optimize(cs, cfg, init);
  EXPECT_EQ(rep.phase.phi, init.phase.phi);
  EXPECT_FALSE(rep.failed);
  for (const auto& it : rep.iterations) EXPECT_EQ(it.mm_iterations, 0);
}

TEST(AlternatingOptimize, UnreachableSensingIsFlagged) {
  Scenario sc;
  sc.gamma1_th_db = sc.gamma2_th_db = 45.0;
  const auto rep = solver::solve_realization(sc, 0);
  EXPECT_TRUE(rep.failed);
  EXPECT_FALSE(rep.feasible);
  EXPECT_FALSE(rep.failure.empty());
}

TEST(ReportJson, DeterministicAndComplete) {
  Scenario sc;
  sc.seed = 7;
  const auto a = solver::report_json(solver::solve_realization(sc, 0), sc, 0);
  const auto b = solver::report_json(solver::solve_realization(sc, 0), sc, 0);
  EXPECT_EQ(a, b);
  const auto j = nlohmann::json::parse(a);
  for (const char* key : {"sum_rate", "iterations", "phase_angles", "precoders", "slacks", "feasible"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_FALSE(j.contains("wall_seconds"));
  EXPECT_EQ(j["phase_angles"].size(), static_cast<std::size_t>(4 * sc.l));
  const auto t = nlohmann::json::parse(solver::report_json(solver::solve_realization(sc, 0), sc, 0, true));
  EXPECT_TRUE(t.contains("wall_seconds"));
}

}  // namespace
