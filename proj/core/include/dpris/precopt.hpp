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

#include "dpris/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace dpris::precopt {

/// A sensing constraint asks for energy towards a target while the precoder
/// carries none in that direction.
class InfeasibleDirection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precoder subproblem at fixed (Phi, U, W).
///
/// Sensing constraints read sum_k ||vtil_i F_k||_F^2 >= sense_i. Callers may
/// pre-scale vtil_i by 1/sigma_r so that sense_i is the linear SNR threshold.
struct PenaltyProblem {
  std::vector<cmat> h;  // effective channels H_k
  std::vector<cmat> u;
  std::vector<cmat> w;
  cmat vtil1;
  cmat vtil2;
  double p0 = 1.0;
  double sense1 = 0.0;
  double sense2 = 0.0;
  double sigma2 = 0.0;  // enters only the constant part of the objective

  Eigen::Index ports() const { return vtil1.cols(); }
};

struct PenaltyOptions {
  double rho0 = 5.0;
  double c = 0.7;
  double xi_tol = 1e-6;
  double eps_tol = 1e-4;
  int max_outer = 60;
  int max_inner = 30;
  double bisection_tol = 1e-13;
  double feasibility_tol = 1e-6;  // relative, for power and sensing at the output
};

struct XUpdate {
  std::vector<cmat> x;
  double tau = 0.0;
};

struct SenseUpdate {
  std::vector<cmat> y;
  double mu = 0.0;
};

/// Closed-form F update: F_k = A^-1 b_k with
/// A = 2 sum_m H_m^H U_m W_m U_m^H H_m + (I + Vtil1^H Vtil1 + Vtil2^H Vtil2) / rho,
/// b_k = (X_k + Vtil1^H Y_k + Vtil2^H Z_k) / rho + 2 H_k^H U_k W_k.
std::vector<cmat> update_f(const PenaltyProblem& problem, const std::vector<cmat>& x, const std::vector<cmat>& y,
                           const std::vector<cmat>& z, double rho);

/// Projection onto the power ball by bisection on the multiplier tau of
/// g(tau) = Lambda / (1 + tau)^2 <= p0 over [0, sqrt(Lambda / p0)].
/// X_k = F_k / (1 + tau).
XUpdate solve_x(const std::vector<cmat>& f, double p0, double tol = 1e-13);

/// Sensing projection: Y_k = Vtil F_k / (1 - mu) with mu in [0, 1) found by
/// bisection on h(mu) = S / (1 - mu)^2 = gamma_th sigma_r2, S = sum ||Vtil F_k||^2.
/// Throws InfeasibleDirection if S == 0 while the threshold is positive.
SenseUpdate solve_y(const std::vector<cmat>& f, const cmat& vtil, double gamma_th, double sigma_r2,
                    double tol = 1e-13);

/// Second target, same projection.
inline SenseUpdate solve_z(const std::vector<cmat>& f, const cmat& vtil, double gamma_th, double sigma_r2,
                           double tol = 1e-13) {
  return solve_y(f, vtil, gamma_th, sigma_r2, tol);
}

struct Residuals {
  double x = 0.0;  // sum ||X_k - F_k||^2
  double y = 0.0;  // sum ||Y_k - Vtil1 F_k||^2
  double z = 0.0;  // sum ||Z_k - Vtil2 F_k||^2

  double max() const { return std::max(x, std::max(y, z)); }
};

Residuals residuals(const PenaltyProblem& problem, const std::vector<cmat>& f, const std::vector<cmat>& x,
                    const std::vector<cmat>& y, const std::vector<cmat>& z);

/// WMMSE part of the precoder objective, sum_k tr(W_k E_k(F)) with the receivers and weights of the problem.
double wmmse_part(const PenaltyProblem& problem, const std::vector<cmat>& f);

/// Penalized inner objective: wmmse_part + (res_x + res_y + res_z) / (2 rho).
double penalized_objective(const PenaltyProblem& problem, const std::vector<cmat>& f, const std::vector<cmat>& x,
                           const std::vector<cmat>& y, const std::vector<cmat>& z, double rho);

struct PenaltyOuterRecord {
  double rho = 0.0;
  Residuals residuals;
  double objective = 0.0;
  int inner_iterations = 0;
  double tau = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
};

struct PenaltyResult {
  std::vector<cmat> f;
  std::vector<PenaltyOuterRecord> trace;
  bool converged = false;  // residuals below xi_tol with a feasible projected iterate
  bool feasible = false;   // output meets power and sensing within feasibility_tol
};

/// Two-layer penalty method. Inner layer cycles F, X, Y, Z until the
/// penalized objective changes by less than eps_tol (fractional); the outer
/// layer shrinks rho by c until all residuals are below xi_tol and the
/// power-scaled iterate meets both sensing constraints.
PenaltyResult penalty_solve(const std::vector<cmat>& f_init, const PenaltyProblem& problem,
                            const PenaltyOptions& options = {});

/// True when sum ||F||^2 <= p0 (1 + tol) and both sensing sums >= sense_i (1 - tol).
bool feasible(const PenaltyProblem& problem, const std::vector<cmat>& f, double tol);

}  // namespace dpris::precopt
