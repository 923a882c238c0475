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
#include "dpris/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace {

using namespace dpris;

TEST(Scenario, DefaultsFollowParameterList) {
  const Scenario s;
  EXPECT_EQ(s.n_t, 6);
  EXPECT_EQ(s.n_r, 6);
  EXPECT_EQ(s.l, 10);
  EXPECT_EQ(s.k, 3);
  EXPECT_EQ(s.p0, 1.0);
  EXPECT_EQ(s.rician_factor, 2.5);
  EXPECT_EQ(s.xpd_los_db, 8.0);
  EXPECT_EQ(s.xpd_nlos_db, 5.0);
  EXPECT_EQ(s.exponent_bs_ris, 2.25);
  EXPECT_EQ(s.exponent_ris_ue, 2.25);
  EXPECT_EQ(s.exponent_bs_ue, 4.75);
  EXPECT_EQ(s.n_realizations, 50);
  EXPECT_NO_THROW(s.validate());
}

TEST(Scenario, NoisePowerFromDensity) {
  Scenario s;
  EXPECT_NEAR(10.0 * std::log10(s.noise_power() * 1e3), -174.0 + 70.0, 1e-9);
  EXPECT_EQ(s.radar_noise_power(), s.noise_power());
  s.sigma2 = 2e-13;
  s.sigma_r2 = 1.0;
  EXPECT_EQ(s.noise_power(), 2e-13);
  EXPECT_EQ(s.radar_noise_power(), 1.0);
}

TEST(Scenario, DerivedQuantities) {
  Scenario s;
  EXPECT_NEAR(s.gamma_th(1), 100.0, 1e-12);
  s.eta2 = 0.25;
  EXPECT_EQ(s.eta(2), 0.25);
  EXPECT_NEAR(s.eta(1), std::sqrt(chanmodel::path_loss_linear(100.0, s.target_path_exponent)), 1e-20);
  const auto p = s.channel_params();
  EXPECT_NEAR(p.xpd.beta2_los, 0.1368, 5e-5);
  EXPECT_NEAR(p.xpd.beta1_nlos, 0.2403, 5e-5);
  EXPECT_EQ(p.eta2, 0.25);
  EXPECT_EQ(p.n_t, s.n_t);
}

TEST(Config, ParsesAssignmentsAndComments) {
  std::istringstream in(
      "# comment\n"
      "mode = sp2x\n"
      "n_t=8   # trailing\n"
      "gamma_th_db = 24\n"
      "target1_deg = -30\n"
      "\n"
      "rho0 = 2.5\n");
  const auto s = parse_config(in);
  EXPECT_EQ(s.mode, ArrayMode::single_2x);
  EXPECT_EQ(s.n_t, 8);
  EXPECT_EQ(s.gamma1_th_db, 24.0);
  EXPECT_EQ(s.gamma2_th_db, 24.0);
  EXPECT_NEAR(s.geometry.target_angles[0], -30.0 * kPi / 180.0, 1e-15);
  EXPECT_EQ(s.solver.penalty.rho0, 2.5);
}

TEST(Config, RejectsBadInput) {
  Scenario s;
  EXPECT_THROW(apply_setting(s, "no_such_key", "1"), ConfigError);
  EXPECT_THROW(apply_setting(s, "n_t", "six"), ConfigError);
  EXPECT_THROW(apply_setting(s, "p0", "1.0x"), ConfigError);
  EXPECT_THROW(apply_setting(s, "mode", "triple"), ConfigError);
  std::istringstream missing_eq("n_t 4\n");
  EXPECT_THROW(parse_config(missing_eq), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/dpris.conf"), ConfigError);
}

TEST(Config, ValidateCatchesBrokenInvariants) {
  Scenario s;
  s.k = 0;
  EXPECT_THROW(s.validate(), ConfigError);
  Scenario t;
  t.solver.penalty.c = 1.5;
  EXPECT_THROW(t.validate(), ConfigError);
}

TEST(Mode, RoundTrip) {
  for (auto m : {ArrayMode::dual_polarized, ArrayMode::single_1x, ArrayMode::single_2x})
    EXPECT_EQ(parse_mode(to_string(m)), m);
}

}  // namespace
