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
#include "dpris/linalg.hpp"
#include "dpris/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace dpris;

TEST(InverseHermitian, AllSizesMatchDenseInverse) {
  Rng rng(1);
  for (Eigen::Index n : {1, 2, 3, 6}) {
    const cmat a = complex_gaussian(rng, n, n);
    const cmat h = a * a.adjoint() + 0.2 * cmat::Identity(n, n);
    EXPECT_LT((inverse_hermitian(h) * h - cmat::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10) << n;
  }
}

TEST(InverseHermitian, RejectsSingular) {
  cmat s = cmat::Ones(2, 2);
  EXPECT_THROW(inverse_hermitian(s), std::domain_error);
  EXPECT_THROW(inverse_hermitian(cmat::Zero(3, 3)), std::domain_error);
  EXPECT_THROW(inverse_hermitian(cmat::Ones(2, 3)), std::domain_error);
}

TEST(LogDet, MatchesDeterminant) {
  Rng rng(2);
  const cmat a = complex_gaussian(rng, 4, 4);
  const cmat h = a * a.adjoint() + cmat::Identity(4, 4);
  EXPECT_NEAR(logdet_hpd(h), std::log(h.determinant().real()), 1e-12);
  EXPECT_THROW(logdet_hpd(-cmat::Identity(2, 2)), std::domain_error);
}

TEST(Helpers, SumsAndEigen) {
  Rng rng(3);
  const std::vector<cmat> m{complex_gaussian(rng, 3, 2), complex_gaussian(rng, 3, 2)};
  EXPECT_NEAR(frob2_sum(m), m[0].squaredNorm() + m[1].squaredNorm(), 1e-14);
  EXPECT_LT((gram_sum(m) - (m[0] * m[0].adjoint() + m[1] * m[1].adjoint())).norm(), 1e-14);
  cmat d = cmat::Zero(3, 3);
  d(0, 0) = 2;
  d(1, 1) = -5;
  d(2, 2) = 1;
  EXPECT_NEAR(lambda_max_hermitian(d), 2.0, 1e-14);
}

TEST(Rng, StreamsAreIndependentAndReplayable) {
  auto a = make_rng(7, 3, Stream::channels);
  auto b = make_rng(7, 3, Stream::channels);
  auto c = make_rng(7, 3, Stream::init);
  auto d = make_rng(7, 4, Stream::channels);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

TEST(Rng, ComplexGaussianMoments) {
  Rng rng(5);
  const cmat z = complex_gaussian(rng, 200, 200);
  EXPECT_NEAR(z.squaredNorm() / z.size(), 1.0, 0.02);
  EXPECT_NEAR(std::abs(z.mean()), 0.0, 0.02);
}

}  // namespace
