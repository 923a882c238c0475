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
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace dpris {

using cd = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Inverse of a small Hermitian positive-definite matrix. 1x1 and 2x2 use
/// the closed-form adjugate; larger sizes fall back to LDLT.
/// Throws std::domain_error when the matrix is numerically singular.
cmat inverse_hermitian(const cmat& a);

/// log det of a Hermitian positive-definite matrix via Cholesky.
/// Throws std::domain_error when the factorization fails.
double logdet_hpd(const cmat& a);

/// 0.5 (A + A^H)
inline cmat hermitian_part(const cmat& a) { return 0.5 * (a + a.adjoint()); }

inline double max_abs(const cmat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

/// Largest eigenvalue of a Hermitian matrix.
double lambda_max_hermitian(const cmat& a);

/// Sum of squared Frobenius norms over a list of matrices.
double frob2_sum(const std::vector<cmat>& mats);

/// Sum_k M_k M_k^H
cmat gram_sum(const std::vector<cmat>& mats);

}  // namespace dpris
