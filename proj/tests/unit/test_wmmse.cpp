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
#include "dpris/wmmse.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace dpris;

struct Instance {
  EffectiveChannels eff;
  PrecoderSet prec;
};

Instance random_instance(Rng& rng, int k = 3, int ports = 6) {
  Instance in;
  for (int i = 0; i < k; ++i) {
    in.eff.h.push_back(complex_gaussian(rng, 2, ports));
    in.prec.f.push_back(complex_gaussian(rng, ports, 2));
  }
  return in;
}

TEST(UpdateU, ZeroPrecodersGiveZeroReceivers) {
  Rng rng(1);
  auto in = random_instance(rng);
  for (auto& f : in.prec.f) f.setZero();
  for (const auto& u : wmmse::update_u(in.eff, in.prec, 1.0)) EXPECT_EQ(u.norm(), 0.0);
}

TEST(UpdateU, ScalarCase) {
  EffectiveChannels eff{{cmat::Constant(1, 1, cd(1.0, 0.0))}};
  PrecoderSet prec{{cmat::Constant(1, 1, cd(1.0, 0.0))}};
  EXPECT_NEAR(std::abs(wmmse::update_u(eff, prec, 1.0)[0](0, 0) - 0.5), 0.0, 1e-15);
}

TEST(UpdateU, LocalMinimalityOfTraceMse) {
  Rng rng(2);
  const auto in = random_instance(rng);
  const double s2 = 0.3;
  const auto u = wmmse::update_u(in.eff, in.prec, s2);
  const auto e = wmmse::mse_matrices(in.eff, in.prec, u, s2);
  for (int t = 0; t < 100; ++t) {
    auto up = u;
    const std::size_t k = t % up.size();
    cmat d = complex_gaussian(rng, 2, 2);
    up[k] += 1e-3 * d / d.norm();
    const auto ep = wmmse::mse_matrices(in.eff, in.prec, up, s2);
    EXPECT_GE(ep[k].trace().real(), e[k].trace().real() - 1e-14);
  }
}

TEST(UpdateW, Inverses) {
  const auto w = wmmse::update_w({cmat::Identity(2, 2)});
  EXPECT_LT((w[0] - cmat::Identity(2, 2)).norm(), 1e-15);
  cmat e = cmat::Zero(2, 2);
  e(0, 0) = 0.5;
  e(1, 1) = 0.25;
  const auto w2 = wmmse::update_w({e});
  EXPECT_NEAR(w2[0](0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(w2[0](1, 1).real(), 4.0, 1e-14);

  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const cmat a = complex_gaussian(rng, 2, 2);
    const cmat pd = a * a.adjoint() + 0.1 * cmat::Identity(2, 2);
    const auto w3 = wmmse::update_w({pd});
    EXPECT_LT((w3[0] * pd - cmat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(WmmseObjective, IdentityCases) {
  EXPECT_NEAR(wmmse::wmmse_objective({cmat::Identity(2, 2)}, {cmat::Identity(2, 2)}), 0.0, 1e-15);
  Rng rng(4);
  const cmat a = complex_gaussian(rng, 2, 2);
  const cmat e = a * a.adjoint() + 0.5 * cmat::Identity(2, 2);
  const auto w = wmmse::update_w({e});
  EXPECT_NEAR(wmmse::wmmse_objective(w, {e}), -std::log(e.determinant().real()), 1e-12);
}

TEST(WmmseObjective, RejectsNonPositiveWeights) {
  EXPECT_THROW(wmmse::wmmse_objective({-cmat::Identity(2, 2)}, {cmat::Identity(2, 2)}), std::domain_error);
}

TEST(WmmseObjective, EqualsSumRateAfterJointUpdate) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto in = random_instance(rng, 2, 4);
    const double s2 = 0.1 + 0.01 * t;
    const auto st = wmmse::update_state(in.eff, in.prec, s2);
    const double obj = wmmse::wmmse_objective(st.w, wmmse::mse_matrices(in.eff, in.prec, st.u, s2));
    EXPECT_NEAR(obj, metrics::sum_rate(in.eff, in.prec, s2), 1e-8);
  }
}

TEST(WmmseObjective, BlockUpdateIsMonotone) {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const auto in = random_instance(rng);
    const double s2 = 0.5;
    std::vector<cmat> u, w;
    for (int k = 0; k < 3; ++k) {
      u.push_back(complex_gaussian(rng, 2, 2));
      w.push_back(cmat::Identity(2, 2));
    }
    const double before = wmmse::wmmse_objective(w, wmmse::mse_matrices(in.eff, in.prec, u, s2));
    const auto u1 = wmmse::update_u(in.eff, in.prec, s2);
    const double mid = wmmse::wmmse_objective(w, wmmse::mse_matrices(in.eff, in.prec, u1, s2));
    const auto e1 = wmmse::mse_matrices(in.eff, in.prec, u1, s2);
    const double after = wmmse::wmmse_objective(wmmse::update_w(e1), e1);
    EXPECT_GE(mid, before - 1e-10);
    EXPECT_GE(after, mid - 1e-10);
  }
}

}  // namespace
