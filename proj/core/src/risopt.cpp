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
#include "dpris/risopt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpris::risopt {

PhaseAggregates phase_aggregates(const ChannelSet& channels, const PrecoderSet& precoders,
                                 const std::vector<cmat>& u, const std::vector<cmat>& w, double sigma2) {
  const std::size_t k_users = channels.h_d.size();
  if (precoders.f.size() != k_users || u.size() != k_users || w.size() != k_users)
    throw std::domain_error("phase_aggregates: user count mismatch");
  const Eigen::Index n_ris = channels.ris_ports();

  PhaseAggregates agg;
  const cmat cov = precoders.covariance();
  if (cov.rows() != channels.g.cols()) throw std::domain_error("phase_aggregates: precoder rows != BS ports");
  agg.fbar = cmat::Zero(n_ris, n_ris);
  agg.p = cmat::Zero(n_ris, n_ris);
  agg.c = hermitian_part(channels.g * cov * channels.g.adjoint());
  const cmat g_cov = channels.g * cov;

  for (std::size_t k = 0; k < k_users; ++k) {
    const cmat& hd = channels.h_d[k];
    const cmat& hr = channels.h_r[k];
    const cmat uwuh = u[k] * w[k] * u[k].adjoint();
    const cmat wuh_hr = w[k] * u[k].adjoint() * hr;
    agg.fbar.noalias() += hr.adjoint() * uwuh * hr;
    agg.p.noalias() += g_cov * hd.adjoint() * uwuh * hr;
    agg.p.noalias() -= channels.g * precoders.f[k] * wuh_hr;

    const cmat uh_hd = u[k].adjoint() * hd;
    const cd quad = (w[k] * uh_hd * cov * uh_hd.adjoint()).trace();
    const cd lin = (w[k] * uh_hd * precoders.f[k]).trace();
    const cd noise = (w[k] * u[k].adjoint() * u[k]).trace();
    agg.const_terms += quad.real() - 2.0 * lin.real() + sigma2 * noise.real() + w[k].trace().real();
  }
  agg.fbar = hermitian_part(agg.fbar);
  return agg;
}

PhaseQuadraticForm assemble_quadratic_form(const cmat& fbar, const cmat& c, const cmat& p, PhaseLayout layout,
                                           Eigen::Index elements, double const_terms) {
  PhaseQuadraticForm form;
  form.layout = layout;
  form.elements = elements;
  form.const_terms = const_terms;

  if (layout == PhaseLayout::diagonal) {
    if (fbar.rows() != elements || c.rows() != elements || p.rows() != elements)
      throw std::domain_error("assemble_quadratic_form: aggregate size does not match element count");
    form.quad = fbar.cwiseProduct(c.transpose());
    form.lin = p.diagonal().conjugate();
    return form;
  }

  const Eigen::Index l = elements;
  if (fbar.rows() != 2 * l || c.rows() != 2 * l || p.rows() != 2 * l)
    throw std::domain_error("assemble_quadratic_form: aggregate size does not match 2L");
  form.quad.resize(4 * l, 4 * l);
  form.lin.resize(4 * l);
  for (Eigen::Index sr = 0; sr < 4; ++sr) {
    const Eigen::Index row_r = sr & 1;
    const Eigen::Index col_r = sr >> 1;
    for (Eigen::Index sc = 0; sc < 4; ++sc) {
      const Eigen::Index row_c = sc & 1;
      const Eigen::Index col_c = sc >> 1;
      form.quad.block(sr * l, sc * l, l, l) =
          fbar.block(row_r * l, row_c * l, l, l).cwiseProduct(c.block(col_c * l, col_r * l, l, l).transpose());
    }
    form.lin.segment(sr * l, l) = p.block(col_r * l, row_r * l, l, l).diagonal().conjugate();
  }
  return form;
}

PhaseQuadraticForm build_quadratic_form(const ChannelSet& channels, const PrecoderSet& precoders,
                                        const std::vector<cmat>& u, const std::vector<cmat>& w, double sigma2) {
  const auto agg = phase_aggregates(channels, precoders, u, w, sigma2);
  auto form = assemble_quadratic_form(agg.fbar, agg.c, agg.p, channels.layout(), channels.ris_elements(),
                                      agg.const_terms);
  form.quad = hermitian_part(form.quad);
  return form;
}

double objective(const PhaseQuadraticForm& form, const cvec& phi) {
  return phi.dot(form.quad * phi).real() + 2.0 * phi.dot(form.lin).real();
}

double lambda_max(const cmat& quad) { return lambda_max_hermitian(quad); }

double surrogate(const PhaseQuadraticForm& form, double lam, const cvec& phi, const cvec& phi_t) {
  const cvec resid = lam * phi_t - form.quad * phi_t;  // (lam I - quad) phi_t
  return lam * phi.squaredNorm() - 2.0 * phi.dot(resid).real() + phi_t.dot(resid).real();
}

cvec mm_step(const cvec& phi, const PhaseQuadraticForm& form, double lam) {
  const cvec q = lam * phi - form.quad * phi - form.lin;
  cvec next(phi.size());
  for (Eigen::Index j = 0; j < phi.size(); ++j) {
    const double mag = std::abs(q(j));
    next(j) = mag > 0.0 ? q(j) / mag : phi(j);
  }
  return next;
}

MmResult optimize_phase(const RisPhase& init, const PhaseQuadraticForm& form, double tol, int max_iter) {
  if (init.phi.size() != form.quad.rows()) throw std::domain_error("optimize_phase: phase/form size mismatch");
  MmResult res;
  res.phase = init;
  const double lam = lambda_max(form.quad);
  double prev = objective(form, init.phi);
  for (int it = 0; it < max_iter; ++it) {
    res.phase.phi = mm_step(res.phase.phi, form, lam);
    const double cur = objective(form, res.phase.phi);
    res.trace.push_back(cur);
    res.iterations = it + 1;
    if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) {
      res.converged = true;
      break;
    }
    prev = cur;
  }
  return res;
}

double quantize_angle(double angle, int bits) {
  if (bits < 1) throw std::domain_error("quantize_angle: bits must be >= 1");
  if (bits > 30) throw std::domain_error("quantize_angle: bits must be <= 30");
  const long levels = 1L << bits;
  const double step = 2.0 * kPi / static_cast<double>(levels);
  double a = std::fmod(angle, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  const double x = a / step;
  const double fl = std::floor(x);
  const long lo = static_cast<long>(fl) % levels;
  const long hi = (lo + 1) % levels;
  const double d_lo = x - fl;
  const double d_hi = 1.0 - d_lo;
  long m;
  if (d_lo < d_hi) m = lo;
  else if (d_hi < d_lo) m = hi;
  else m = std::min(lo, hi);
  return step * static_cast<double>(m);
}

RisPhase quantize_phase(const RisPhase& phase, int bits) {
  RisPhase out = phase;
  for (Eigen::Index j = 0; j < phase.phi.size(); ++j)
    out.phi(j) = std::polar(1.0, quantize_angle(std::arg(phase.phi(j)), bits));
  return out;
}

}  // namespace dpris::risopt
