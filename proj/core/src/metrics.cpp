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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dpris {

RisPhase RisPhase::ones(PhaseLayout layout, Eigen::Index elements) {
  return {layout, elements, cvec::Ones(coefficient_count(layout, elements))};
}

RisPhase RisPhase::random(Rng& rng, PhaseLayout layout, Eigen::Index elements) {
  std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
  RisPhase p{layout, elements, cvec(coefficient_count(layout, elements))};
  for (Eigen::Index j = 0; j < p.phi.size(); ++j) p.phi(j) = std::polar(1.0, uni(rng));
  return p;
}

bool RisPhase::unit_modulus(double tol) const {
  for (Eigen::Index j = 0; j < phi.size(); ++j)
    if (std::abs(std::abs(phi(j)) - 1.0) > tol) return false;
  return true;
}

PhaseSlot phase_slot(PhaseLayout layout, Eigen::Index elements, Eigen::Index j) {
  if (layout == PhaseLayout::diagonal) return {j, j};
  const Eigen::Index s = j / elements;
  const Eigen::Index n = j % elements;
  return {(s & 1) * elements + n, (s >> 1) * elements + n};
}

namespace metrics {

cmat expand_phase(const RisPhase& phase) {
  const Eigen::Index n = phase.ports();
  if (phase.phi.size() != RisPhase::coefficient_count(phase.layout, phase.elements))
    throw std::domain_error("expand_phase: coefficient count does not match the layout");
  cmat out = cmat::Zero(n, n);
  for (Eigen::Index j = 0; j < phase.phi.size(); ++j) {
    const auto slot = phase_slot(phase.layout, phase.elements, j);
    out(slot.row, slot.col) = phase.phi(j);
  }
  return out;
}

RisPhase collapse_phase(const cmat& phi_matrix, PhaseLayout layout) {
  const Eigen::Index n = phi_matrix.rows();
  const Eigen::Index elements = layout == PhaseLayout::dual_polarized ? n / 2 : n;
  RisPhase p{layout, elements, cvec(RisPhase::coefficient_count(layout, elements))};
  for (Eigen::Index j = 0; j < p.phi.size(); ++j) {
    const auto slot = phase_slot(layout, elements, j);
    p.phi(j) = phi_matrix(slot.row, slot.col);
  }
  return p;
}

EffectiveChannels compose_channels(const ChannelSet& channels, const RisPhase& phase) {
  if (phase.layout != channels.layout() || phase.ports() != channels.ris_ports())
    throw std::domain_error("compose_channels: RIS phase has " + std::to_string(phase.ports()) +
                            " ports, channel set has " + std::to_string(channels.ris_ports()));
  const cmat phi_g = expand_phase(phase) * channels.g;
  EffectiveChannels eff;
  eff.h.reserve(channels.h_d.size());
  for (std::size_t k = 0; k < channels.h_d.size(); ++k) {
    if (channels.h_d[k].cols() != channels.g.cols() || channels.h_r[k].cols() != channels.g.rows())
      throw std::domain_error("compose_channels: inconsistent channel dimensions for user " + std::to_string(k));
    eff.h.push_back(channels.h_d[k] + channels.h_r[k] * phi_g);
  }
  return eff;
}

std::vector<double> user_rates(const EffectiveChannels& effective, const PrecoderSet& precoders, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::domain_error("sum_rate: noise power must be positive");
  if (effective.h.size() != precoders.f.size()) throw std::domain_error("sum_rate: user count mismatch");
  std::vector<double> rates;
  rates.reserve(effective.h.size());
  for (std::size_t k = 0; k < effective.h.size(); ++k) {
    const cmat& h = effective.h[k];
    const Eigen::Index m = h.rows();
    cmat interference = sigma2 * cmat::Identity(m, m);
    for (std::size_t i = 0; i < precoders.f.size(); ++i) {
      if (i == k) continue;
      const cmat hf = h * precoders.f[i];
      interference.noalias() += hf * hf.adjoint();
    }
    const cmat hf = h * precoders.f[k];
    const cmat total = interference + hf * hf.adjoint();
    rates.push_back(logdet_hpd(hermitian_part(total)) - logdet_hpd(hermitian_part(interference)));
  }
  return rates;
}

double sum_rate(const EffectiveChannels& effective, const PrecoderSet& precoders, double sigma2) {
  double acc = 0.0;
  for (double r : user_rates(effective, precoders, sigma2)) acc += r;
  return acc;
}

cmat mse_matrix(const cmat& h_k, const PrecoderSet& precoders, const cmat& u_k, double sigma2, Eigen::Index k) {
  const cmat& f_k = precoders.f.at(static_cast<std::size_t>(k));
  const cmat cov = precoders.covariance();
  const cmat uh_h = u_k.adjoint() * h_k;
  const cmat cross = uh_h * f_k;
  const Eigen::Index d = f_k.cols();
  cmat e = uh_h * cov * uh_h.adjoint() - cross - cross.adjoint() + sigma2 * (u_k.adjoint() * u_k) +
           cmat::Identity(d, d);
  return hermitian_part(e);
}

double radar_snr(const PrecoderSet& precoders, const cmat& vtil, double sigma_r2) {
  if (!(sigma_r2 > 0.0)) throw std::domain_error("radar_snr: radar noise power must be positive");
  double acc = 0.0;
  for (const auto& f : precoders.f) acc += (vtil * f).squaredNorm();
  return acc / sigma_r2;
}

std::vector<BeamSample> beampattern(const PrecoderSet& precoders, std::span<const double> theta_grid,
                                    double spacing_ratio, ArrayMode mode) {
  std::vector<BeamSample> out;
  out.reserve(theta_grid.size());
  if (precoders.f.empty()) {
    for (double th : theta_grid) out.push_back({th, 0.0, 0.0, 0.0});
    return out;
  }
  const cmat cov = precoders.covariance();
  const Eigen::Index ports = cov.rows();
  const bool dual = mode == ArrayMode::dual_polarized;
  const Eigen::Index n = dual ? ports / 2 : ports;
  const cmat cov_v = cov.topLeftCorner(n, n);
  const cmat cov_h = dual ? cmat(cov.bottomRightCorner(n, n)) : cmat::Zero(n, n);
  for (double th : theta_grid) {
    const cvec a = chanmodel::steering_vector(th, n, spacing_ratio);
    const double pv = std::max(0.0, a.dot(cov_v * a).real());
    const double ph = std::max(0.0, a.dot(cov_h * a).real());
    out.push_back({th, pv, ph, pv + ph});
  }
  return out;
}

}  // namespace metrics
}  // namespace dpris
