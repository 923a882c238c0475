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

#include <cmath>
#include <stdexcept>

namespace dpris::wmmse {

std::vector<cmat> update_u(const EffectiveChannels& effective, const PrecoderSet& precoders, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::domain_error("update_u: noise power must be positive");
  const cmat cov = precoders.covariance();
  std::vector<cmat> u;
  u.reserve(effective.h.size());
  for (std::size_t k = 0; k < effective.h.size(); ++k) {
    const cmat& h = effective.h[k];
    const Eigen::Index m = h.rows();
    const cmat rx = hermitian_part(h * cov * h.adjoint()) + sigma2 * cmat::Identity(m, m);
    u.push_back(inverse_hermitian(rx) * (h * precoders.f[k]));
  }
  return u;
}

std::vector<cmat> mse_matrices(const EffectiveChannels& effective, const PrecoderSet& precoders,
                               const std::vector<cmat>& u, double sigma2) {
  std::vector<cmat> e;
  e.reserve(effective.h.size());
  for (std::size_t k = 0; k < effective.h.size(); ++k)
    e.push_back(metrics::mse_matrix(effective.h[k], precoders, u[k], sigma2, static_cast<Eigen::Index>(k)));
  return e;
}

std::vector<cmat> update_w(const std::vector<cmat>& mse) {
  std::vector<cmat> w;
  w.reserve(mse.size());
  for (const auto& e : mse) {
    try {
      w.push_back(hermitian_part(inverse_hermitian(e)));
    } catch (const std::domain_error&) {
      throw std::domain_error("update_w: singular MSE matrix (degenerate channel draw)");
    }
  }
  return w;
}

double wmmse_objective(const std::vector<cmat>& w, const std::vector<cmat>& mse) {
  if (w.size() != mse.size()) throw std::domain_error("wmmse_objective: size mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Eigen::LLT<cmat> llt(hermitian_part(w[k]));
    if (llt.info() != Eigen::Success) throw std::domain_error("wmmse_objective: weight matrix is not positive definite");
    const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
    acc += logdet - (w[k] * mse[k]).trace().real() + static_cast<double>(w[k].rows());
  }
  return acc;
}

WmmseState update_state(const EffectiveChannels& effective, const PrecoderSet& precoders, double sigma2) {
  WmmseState s;
  s.u = update_u(effective, precoders, sigma2);
  s.w = update_w(mse_matrices(effective, precoders, s.u, sigma2));
  return s;
}

}  // namespace dpris::wmmse
