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
#include "dpris/metrics.hpp"
#include "dpris/precopt.hpp"
#include "dpris/risopt.hpp"
#include "dpris/solver.hpp"
#include "dpris/wmmse.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace dpris;

// One realization of the default scenario with L elements, together with the
// WMMSE state at its initial point.
struct Fixture {
  Scenario sc;
  ChannelSet channels;
  solver::InitState init;
  solver::AoConfig config;
  EffectiveChannels eff;
  wmmse::WmmseState state;

  explicit Fixture(int l) {
    sc.l = l;
    auto rng = make_rng(sc.seed, 0, Stream::channels);
    channels = chanmodel::generate_channels(rng, sc.channel_params(), sc.mode);
    auto init_rng = make_rng(sc.seed, 0, Stream::init);
    init = solver::init_state(channels, sc.p0, init_rng);
    config = solver::make_config(sc);
    eff = metrics::compose_channels(channels, init.phase);
    state = wmmse::update_state(eff, init.precoders, config.sigma2);
  }
};

void BM_SumRate(benchmark::State& st) {
  const Fixture fx(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(metrics::sum_rate(fx.eff, fx.init.precoders, fx.config.sigma2));
}
BENCHMARK(BM_SumRate)->Arg(10)->Arg(40);

void BM_MmStep(benchmark::State& st) {
  const Fixture fx(static_cast<int>(st.range(0)));
  const auto form =
      risopt::build_quadratic_form(fx.channels, fx.init.precoders, fx.state.u, fx.state.w, fx.config.sigma2);
  const double lam = risopt::lambda_max(form.quad);
  cvec phi = fx.init.phase.phi;
  for (auto _ : st) {
    phi = risopt::mm_step(phi, form, lam);
    benchmark::DoNotOptimize(phi.data());
  }
}
BENCHMARK(BM_MmStep)->Arg(10)->Arg(40);

void BM_PenaltySolve(benchmark::State& st) {
  const Fixture fx(static_cast<int>(st.range(0)));
  const double sigma_r = std::sqrt(fx.config.sense.sigma_r2);
  const precopt::PenaltyProblem problem{fx.eff.h,
                                        fx.state.u,
                                        fx.state.w,
                                        fx.channels.targets.vtil1 / sigma_r,
                                        fx.channels.targets.vtil2 / sigma_r,
                                        fx.config.p0,
                                        fx.config.sense.gamma1_th,
                                        fx.config.sense.gamma2_th,
                                        fx.config.sigma2};
  for (auto _ : st)
    benchmark::DoNotOptimize(precopt::penalty_solve(fx.init.precoders.f, problem, fx.config.settings.penalty));
}
BENCHMARK(BM_PenaltySolve)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_FullSolve(benchmark::State& st) {
  const Fixture fx(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solver::alternating_optimize(fx.channels, fx.config, fx.init));
}
BENCHMARK(BM_FullSolve)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
