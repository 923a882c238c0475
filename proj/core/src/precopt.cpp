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

#include <algorithm>
#include <cmath>
#include <string>

namespace dpris::precopt {

namespace {

/// Quantities of the F update that do not change inside one penalty solve.
struct Prepared {
  cmat b;                  // sum_m H_m^H U_m W_m U_m^H H_m
  std::vector<cmat> t;     // H_k^H U_k W_k
  cmat sense_gram;         // I + Vtil1^H Vtil1 + Vtil2^H Vtil2
  cmat v1h, v2h;           // Vtil_i^H
  double const_terms = 0.0;  // sum_k tr(W_k (sigma2 U_k^H U_k + I))

  explicit Prepared(const PenaltyProblem& pr) {
    const Eigen::Index n = pr.ports();
    if (pr.h.size() != pr.u.size() || pr.h.size() != pr.w.size())
      throw std::domain_error("penalty problem: user count mismatch");
    b = cmat::Zero(n, n);
    t.reserve(pr.h.size());
    for (std::size_t k = 0; k < pr.h.size(); ++k) {
      if (pr.h[k].cols() != n) throw std::domain_error("penalty problem: channel has wrong port count");
      const cmat hu = pr.h[k].adjoint() * pr.u[k];
      t.push_back(hu * pr.w[k]);
      b.noalias() += t.back() * hu.adjoint();
      const_terms += (pr.w[k] * (pr.sigma2 * pr.u[k].adjoint() * pr.u[k] +
                                 cmat::Identity(pr.u[k].cols(), pr.u[k].cols())))
                         .trace()
                         .real();
    }
    b = hermitian_part(b);
    v1h = pr.vtil1.adjoint();
    v2h = pr.vtil2.adjoint();
    sense_gram = cmat::Identity(n, n) + v1h * pr.vtil1 + v2h * pr.vtil2;
  }

  Eigen::LLT<cmat> factor(double rho) const {
    Eigen::LLT<cmat> llt(hermitian_part(2.0 * b + sense_gram / rho));
    if (llt.info() != Eigen::Success) throw std::domain_error("update_f: system matrix is not positive definite");
    return llt;
  }

  std::vector<cmat> solve_f(const Eigen::LLT<cmat>& llt, const std::vector<cmat>& x, const std::vector<cmat>& y,
                            const std::vector<cmat>& z, double rho) const {
    std::vector<cmat> f;
    f.reserve(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
      const cmat rhs = (x[k] + v1h * y[k] + v2h * z[k]) / rho + 2.0 * t[k];
      f.push_back(llt.solve(rhs));
    }
    return f;
  }

  double wmmse_part(const std::vector<cmat>& f) const {
    double acc = const_terms;
    for (std::size_t k = 0; k < f.size(); ++k) {
      acc -= 2.0 * (t[k].adjoint() * f[k]).trace().real();
      acc += (f[k].adjoint() * b * f[k]).trace().real();
    }
    return acc;
  }
};

std::vector<cmat> map_response(const cmat& v, const std::vector<cmat>& f) {
  std::vector<cmat> out;
  out.reserve(f.size());
  for (const auto& fk : f) out.push_back(v * fk);
  return out;
}

double sense_energy(const cmat& vtil, const std::vector<cmat>& f) {
  double acc = 0.0;
  for (const auto& fk : f) acc += (vtil * fk).squaredNorm();
  return acc;
}

double diff2(const std::vector<cmat>& a, const std::vector<cmat>& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += (a[k] - b[k]).squaredNorm();
  return acc;
}

Residuals residuals_of(const PenaltyProblem& pr, const std::vector<cmat>& f, const std::vector<cmat>& x,
                       const std::vector<cmat>& y, const std::vector<cmat>& z) {
  Residuals r;
  r.x = diff2(x, f);
  for (std::size_t k = 0; k < f.size(); ++k) {
    r.y += (y[k] - pr.vtil1 * f[k]).squaredNorm();
    r.z += (z[k] - pr.vtil2 * f[k]).squaredNorm();
  }
  return r;
}

void scale_to_power(std::vector<cmat>& f, double p0) {
  const double lambda = frob2_sum(f);
  if (lambda > p0) {
    const double s = std::sqrt(p0 / lambda);
    for (auto& fk : f) fk *= s;
  }
}

}  // namespace

std::vector<cmat> update_f(const PenaltyProblem& problem, const std::vector<cmat>& x, const std::vector<cmat>& y,
                           const std::vector<cmat>& z, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("update_f: rho must be positive");
  const Prepared prep(problem);
  return prep.solve_f(prep.factor(rho), x, y, z, rho);
}

XUpdate solve_x(const std::vector<cmat>& f, double p0, double tol) {
  if (!(p0 > 0.0)) throw std::domain_error("solve_x: power budget must be positive");
  const double lambda = frob2_sum(f);
  XUpdate out;
  if (lambda <= p0) {
    out.x = f;
    return out;
  }
  auto g = [lambda](double tau) { return lambda / ((1.0 + tau) * (1.0 + tau)); };
  double lb = 0.0;
  double ub = std::sqrt(lambda / p0);
  while (ub - lb > tol * std::max(1.0, ub)) {
    const double mid = 0.5 * (lb + ub);
    if (mid <= lb || mid >= ub) break;
    if (g(mid) > p0) lb = mid;
    else ub = mid;
  }
  // The upper bracket end always satisfies g(tau) <= p0.
  out.tau = ub;
  out.x.reserve(f.size());
  for (const auto& fk : f) out.x.push_back(fk / (1.0 + out.tau));
  return out;
}

SenseUpdate solve_y(const std::vector<cmat>& f, const cmat& vtil, double gamma_th, double sigma_r2, double tol) {
  const double target = gamma_th * sigma_r2;
  SenseUpdate out;
  out.y = map_response(vtil, f);
  const double s = sense_energy(vtil, f);
  if (s >= target) return out;
  if (!(s > 0.0))
    throw InfeasibleDirection("sensing projection: precoders carry no energy towards the target (threshold " +
                              std::to_string(target) + ")");
  auto h = [s](double mu) { return s / ((1.0 - mu) * (1.0 - mu)); };
  double lb = 0.0;
  double ub = 1.0;
  while (ub - lb > tol) {
    const double mid = 0.5 * (lb + ub);
    if (mid <= lb || mid >= ub) break;
    if (h(mid) < target) lb = mid;
    else ub = mid;
  }
  // ub < 1 once the loop has run; h(ub) >= target keeps Y feasible.
  out.mu = ub;
  const double scale = 1.0 / (1.0 - out.mu);
  for (auto& yk : out.y) yk *= scale;
  return out;
}

Residuals residuals(const PenaltyProblem& problem, const std::vector<cmat>& f, const std::vector<cmat>& x,
                    const std::vector<cmat>& y, const std::vector<cmat>& z) {
  return residuals_of(problem, f, x, y, z);
}

double wmmse_part(const PenaltyProblem& problem, const std::vector<cmat>& f) {
  return Prepared(problem).wmmse_part(f);
}

double penalized_objective(const PenaltyProblem& problem, const std::vector<cmat>& f, const std::vector<cmat>& x,
                           const std::vector<cmat>& y, const std::vector<cmat>& z, double rho) {
  const auto r = residuals_of(problem, f, x, y, z);
  return wmmse_part(problem, f) + (r.x + r.y + r.z) / (2.0 * rho);
}

bool feasible(const PenaltyProblem& problem, const std::vector<cmat>& f, double tol) {
  if (frob2_sum(f) > problem.p0 * (1.0 + tol)) return false;
  if (sense_energy(problem.vtil1, f) < problem.sense1 * (1.0 - tol)) return false;
  if (sense_energy(problem.vtil2, f) < problem.sense2 * (1.0 - tol)) return false;
  return true;
}

PenaltyResult penalty_solve(const std::vector<cmat>& f_init, const PenaltyProblem& problem,
                            const PenaltyOptions& opt) {
  if (!(opt.rho0 > 0.0)) throw std::domain_error("penalty_solve: rho0 must be positive");
  if (!(opt.c > 0.0 && opt.c < 1.0)) throw std::domain_error("penalty_solve: c must lie in (0, 1)");
  const Prepared prep(problem);

  std::vector<cmat> f = f_init;
  std::vector<cmat> x = f;
  std::vector<cmat> y = map_response(problem.vtil1, f);
  std::vector<cmat> z = map_response(problem.vtil2, f);

  PenaltyResult res;
  double rho = opt.rho0;
  double tau = 0.0, mu1 = 0.0, mu2 = 0.0;

  auto inner_pass = [&](const Eigen::LLT<cmat>& llt) {
    f = prep.solve_f(llt, x, y, z, rho);
    auto xu = solve_x(f, problem.p0, opt.bisection_tol);
    x = std::move(xu.x);
    tau = xu.tau;
    auto yu = solve_y(f, problem.vtil1, problem.sense1, 1.0, opt.bisection_tol);
    y = std::move(yu.y);
    mu1 = yu.mu;
    auto zu = solve_z(f, problem.vtil2, problem.sense2, 1.0, opt.bisection_tol);
    z = std::move(zu.y);
    mu2 = zu.mu;
  };
  auto objective = [&] {
    const auto r = residuals_of(problem, f, x, y, z);
    return prep.wmmse_part(f) + (r.x + r.y + r.z) / (2.0 * rho);
  };
  auto projected = [&] {
    std::vector<cmat> fp = f;
    scale_to_power(fp, problem.p0);
    return fp;
  };

  for (int outer = 0; outer < opt.max_outer; ++outer) {
    const auto llt = prep.factor(rho);
    double prev = objective();
    PenaltyOuterRecord rec;
    rec.rho = rho;
    for (int inner = 0; inner < opt.max_inner; ++inner) {
      inner_pass(llt);
      ++rec.inner_iterations;
      const double cur = objective();
      const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
      const bool settled = std::abs(cur - prev) <= opt.eps_tol * scale;
      prev = cur;
      if (settled) break;
    }
    rec.residuals = residuals_of(problem, f, x, y, z);
    rec.objective = prev;
    rec.tau = tau;
    rec.mu1 = mu1;
    rec.mu2 = mu2;
    res.trace.push_back(rec);

    if (rec.residuals.max() < opt.xi_tol && feasible(problem, projected(), opt.feasibility_tol)) {
      res.converged = true;
      break;
    }
    if (outer + 1 < opt.max_outer) rho *= opt.c;
  }

  scale_to_power(f, problem.p0);
  if (!feasible(problem, f, opt.feasibility_tol)) {
    inner_pass(prep.factor(rho));
    scale_to_power(f, problem.p0);
  }
  res.feasible = feasible(problem, f, opt.feasibility_tol);
  res.f = std::move(f);
  return res;
}

}  // namespace dpris::precopt
