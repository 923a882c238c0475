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

#include <cmath>
#include <stdexcept>

namespace dpris {

cmat inverse_hermitian(const cmat& a) {
  if (a.rows() != a.cols()) throw std::domain_error("inverse_hermitian: matrix is not square");
  const auto n = a.rows();
  const double scale = a.norm();
  if (n == 0) return a;
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::domain_error("inverse_hermitian: zero or non-finite matrix");

  if (n == 1) {
    cmat out(1, 1);
    out(0, 0) = 1.0 / a(0, 0);
    return out;
  }
  if (n == 2) {
    const cd det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if (std::abs(det) <= 1e-14 * scale * scale) throw std::domain_error("inverse_hermitian: singular 2x2 matrix");
    cmat out(2, 2);
    out(0, 0) = a(1, 1) / det;
    out(0, 1) = -a(0, 1) / det;
    out(1, 0) = -a(1, 0) / det;
    out(1, 1) = a(0, 0) / det;
    return out;
  }

  Eigen::LDLT<cmat> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw std::domain_error("inverse_hermitian: factorization failed");
  const rvec d = ldlt.vectorD().real();
  if (d.cwiseAbs().minCoeff() <= 1e-14 * d.cwiseAbs().maxCoeff())
    throw std::domain_error("inverse_hermitian: singular matrix");
  return ldlt.solve(cmat::Identity(n, n));
}

double logdet_hpd(const cmat& a) {
  Eigen::LLT<cmat> llt(a);
  if (llt.info() != Eigen::Success) throw std::domain_error("logdet_hpd: matrix is not positive definite");
  const cmat& l = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double d = l(i, i).real();
    if (!(d > 0.0)) throw std::domain_error("logdet_hpd: non-positive pivot");
    acc += std::log(d);
  }
  return 2.0 * acc;
}

double lambda_max_hermitian(const cmat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<cmat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double frob2_sum(const std::vector<cmat>& mats) {
  double acc = 0.0;
  for (const auto& m : mats) acc += m.squaredNorm();
  return acc;
}

cmat gram_sum(const std::vector<cmat>& mats) {
  if (mats.empty()) return {};
  cmat acc = cmat::Zero(mats.front().rows(), mats.front().rows());
  for (const auto& m : mats) acc.noalias() += m * m.adjoint();
  return acc;
}

}  // namespace dpris
