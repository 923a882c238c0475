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
#include "dpris/experiments.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

namespace {

using namespace dpris;
using namespace dpris::experiments;

Scenario small_scenario() {
  Scenario sc;
  sc.l = 4;
  sc.solver.ao_max_iter = 5;
  return sc;
}

SweepSpec small_sweep() {
  SweepSpec s;
  s.convergence_l = {4};
  s.comparison_n_t = {4};
  s.quantization_n_t = {4};
  s.quantization_l = 4;
  s.quantization_bits = {0, 1, 2};
  s.xpd_l = {4};
  s.xpd_pairs = {{1, 4}, {9, 13}};
  s.tradeoff_n_t = {6};
  s.tradeoff_gamma_db = {20, 24};
  return s;
}

TEST(Stats, MeanAndStandardError) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.se, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(s.n, 4u);
  const std::vector<double> w{0, 2, 2, 4};
  const auto d = paired_difference(v, w);
  EXPECT_DOUBLE_EQ(d.mean, 0.5);
  EXPECT_THROW(paired_difference(v, std::vector<double>{1}), std::invalid_argument);
  EXPECT_EQ(summarize(std::vector<double>{}).n, 0u);
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
  std::vector<int> hits(37, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(8, 3, [](std::size_t i) { if (i == 5) throw std::runtime_error("boom"); }),
               std::runtime_error);
}

TEST(Table, CsvRendering) {
  Table t{{"a", "b"}, {{"1", "x"}, {"2", "y"}}};
  EXPECT_EQ(t.to_csv(), "a,b\n1,x\n2,y\n");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(26), "26");
}

TEST(Runners, Schemas) {
  const auto sc = small_scenario();
  const auto sw = small_sweep();
  RunOptions ro;
  ro.n_seeds = 2;
  ro.threads = 2;
  using H = std::vector<std::string>;
  const auto conv = convergence(sc, sw, ro);
  EXPECT_EQ(conv.file("convergence.csv").header, (H{"l", "seed", "iteration", "sum_rate", "wmmse_objective", "delta"}));
  EXPECT_EQ(conv.file("convergence_penalty.csv").header.front(), "l");
  EXPECT_EQ(conv.file("convergence_summary.csv").rows.size(), 6u);

  const auto cmp = sp_comparison(sc, sw, ro);
  EXPECT_EQ(cmp.file("sp_comparison.csv").rows.size(), 3u * 2u);
  EXPECT_EQ(cmp.file("sp_comparison_summary.csv").header, (H{"n_t", "mode", "mean", "se", "n", "failures"}));

  const auto q = quantization(sc, sw, ro);
  EXPECT_EQ(q.file("quantization.csv").rows.size(), 2u * 3u * 2u);
  EXPECT_EQ(q.file("quantization.csv").header,
            (H{"n_t", "mode", "bits", "seed", "sum_rate", "sum_rate_fixed_precoders"}));

  const auto x = xpd_sweep(sc, sw, ro);
  EXPECT_EQ(x.file("xpd_sweep.csv").rows.size(), 4u);

  const auto t = snr_tradeoff(sc, sw, ro);
  EXPECT_EQ(t.file("snr_tradeoff.csv").header,
            (H{"n_t", "gamma_th_db", "seed", "sum_rate", "gamma1_db", "gamma2_db", "feasible"}));

  const auto b = beampattern(sc, SweepSpec{}, ro);
  const auto& bt = b.file("beampattern.csv");
  EXPECT_EQ(bt.header, (H{"angle_deg", "pv", "ph", "ptotal"}));
  EXPECT_EQ(bt.rows.size(), 361u);
  EXPECT_EQ(bt.rows.front()[0], "-90");
  EXPECT_EQ(bt.rows.back()[0], "90");
}

TEST(Runners, DeterministicAcrossThreadCounts) {
  const auto sc = small_scenario();
  const auto sw = small_sweep();
  RunOptions one, many;
  one.n_seeds = many.n_seeds = 3;
  one.threads = 1;
  many.threads = 3;
  EXPECT_EQ(xpd_sweep(sc, sw, one).file("xpd_sweep.csv").to_csv(),
            xpd_sweep(sc, sw, many).file("xpd_sweep.csv").to_csv());
}

TEST(Runners, ObserverSeesEverySolve) {
  const auto sc = small_scenario();
  RunOptions ro;
  ro.n_seeds = 2;
  std::size_t seen = 0;
  ro.on_solved = [&](const Scenario&, std::uint64_t, const SolvedPoint&) { ++seen; };
  snr_tradeoff(sc, small_sweep(), ro);
  EXPECT_EQ(seen, 4u);
}

TEST(Runners, DispatchByName) {
  EXPECT_EQ(names().size(), 6u);
  EXPECT_THROW(run("no_such_experiment", Scenario{}, SweepSpec{}, RunOptions{}), std::invalid_argument);
}

}  // namespace
