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
#include "dpris/validation/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpris::validation::oracle {

cmat reflection_matrix(const RisPhase& phase) {
  const Eigen::Index l = phase.elements;
  if (phase.layout == PhaseLayout::diagonal) return phase.phi.asDiagonal();
  if (phase.phi.size() != 4 * l) throw std::invalid_argument("reflection_matrix: expected 4L coefficients");
  cmat out = cmat::Zero(2 * l, 2 * l);
  out.block(0, 0, l, l) = phase.phi.segment(0, l).asDiagonal();
  out.block(l, 0, l, l) = phase.phi.segment(l, l).asDiagonal();
  out.block(0, l, l, l) = phase.phi.segment(2 * l, l).asDiagonal();
  out.block(l, l, l, l) = phase.phi.segment(3 * l, l).asDiagonal();
  return out;
}

std::vector<cmat> effective_channels(const ChannelSet& channels, const RisPhase& phase) {
  const cmat phi = reflection_matrix(phase);
  std::vector<cmat> h;
  for (std::size_t k = 0; k < channels.h_d.size(); ++k) h.push_back(channels.h_d[k] + channels.h_r[k] * phi * channels.g);
  return h;
}

double sum_rate(const std::vector<cmat>& h, const std::vector<cmat>& f, double sigma2) {
  double total = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Eigen::Index n = h[k].rows();
    cmat r = sigma2 * cmat::Identity(n, n);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (i != k) r += h[k] * f[i] * f[i].adjoint() * h[k].adjoint();
    const cmat s = r + h[k] * f[k] * f[k].adjoint() * h[k].adjoint();
    total += std::log(std::abs(s.partialPivLu().determinant())) - std::log(std::abs(r.partialPivLu().determinant()));
  }
  return total;
}

double power(const std::vector<cmat>& f) {
  double p = 0.0;
  for (const auto& fk : f) p += (fk * fk.adjoint()).trace().real();
  return p;
}

double radar_snr(const cmat& vtil, const std::vector<cmat>& f, double sigma_r2) {
  cmat r = cmat::Zero(vtil.cols(), vtil.cols());
  for (const auto& fk : f) r += fk * fk.adjoint();
  return (vtil.adjoint() * vtil * r).trace().real() / sigma_r2;
}

double quadratic_trace(const cmat& fbar, const cmat& c, const RisPhase& phase) {
  const cmat phi = reflection_matrix(phase);
  return (fbar * phi * c * phi.adjoint()).trace().real();
}

cd linear_trace(const cmat& p, const RisPhase& phase) { return (reflection_matrix(phase) * p).trace(); }

double power_multiplier(double lambda, double p0) { return std::max(0.0, std::sqrt(lambda / p0) - 1.0); }

PolarPower polar_power(const cmat& dp) {
  const Eigen::Index r = dp.rows() / 2;
  const Eigen::Index c = dp.cols() / 2;
  PolarPower out;
  out.co = dp.block(0, 0, r, c).squaredNorm() + dp.block(r, c, r, c).squaredNorm();
  out.cross = dp.block(0, c, r, c).squaredNorm() + dp.block(r, 0, r, c).squaredNorm();
  return out;
}

double configured_xpd(double beta) { return (1.0 - beta) / beta; }

}  // namespace dpris::validation::oracle
