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

#include <vector>

namespace dpris::wmmse {

/// Receive filters and MSE weights of all users.
struct WmmseState {
  std::vector<cmat> u;
  std::vector<cmat> w;
};

/// MMSE receivers U_k = (H_k (sum_i F_i F_i^H) H_k^H + sigma2 I)^-1 H_k F_k.
std::vector<cmat> update_u(const EffectiveChannels& effective, const PrecoderSet& precoders, double sigma2);

/// MSE matrices of all users for the given receivers.
std::vector<cmat> mse_matrices(const EffectiveChannels& effective, const PrecoderSet& precoders,
                               const std::vector<cmat>& u, double sigma2);

/// W_k = E_k^-1, symmetrized. Throws std::domain_error on a singular E_k.
std::vector<cmat> update_w(const std::vector<cmat>& mse);

/// sum_k (ln det W_k - tr(W_k E_k) + d_k), d_k the stream count of user k.
/// Throws std::domain_error when some det W_k <= 0.
double wmmse_objective(const std::vector<cmat>& w, const std::vector<cmat>& mse);

/// Joint (U, W) update at fixed precoders and phase.
WmmseState update_state(const EffectiveChannels& effective, const PrecoderSet& precoders, double sigma2);

}  // namespace dpris::wmmse
