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

#include "dpris/chanmodel.hpp"
#include "dpris/metrics.hpp"

#include <vector>

/// Reference computations written straight from the model definitions. They
/// share no code with the solver stack beyond the matrix types.
namespace dpris::validation::oracle {

/// Reflection matrix built block by block: diag(phi_vv) top-left,
/// diag(phi_hv) bottom-left, diag(phi_vh) top-right, diag(phi_hh) bottom-right.
cmat reflection_matrix(const RisPhase& phase);

std::vector<cmat> effective_channels(const ChannelSet& channels, const RisPhase& phase);

/// sum_k ln( det(R_k + H_k F_k F_k^H H_k^H) / det(R_k) ), R_k the interference
/// plus noise covariance, determinants through partial-pivot LU.
double sum_rate(const std::vector<cmat>& h, const std::vector<cmat>& f, double sigma2);

double power(const std::vector<cmat>& f);

/// tr(Vtil^H Vtil R) / sigma_r2 with R = sum_k F_k F_k^H.
double radar_snr(const cmat& vtil, const std::vector<cmat>& f, double sigma_r2);

/// Re tr(fbar Phi c Phi^H)
double quadratic_trace(const cmat& fbar, const cmat& c, const RisPhase& phase);

/// tr(Phi p)
cd linear_trace(const cmat& p, const RisPhase& phase);

/// Multiplier of the power projection: max(0, sqrt(lambda / p0) - 1).
double power_multiplier(double lambda, double p0);

/// Co-polar and cross-polar power of a 2x2-block DP matrix.
struct PolarPower {
  double co = 0.0;     // |vv|^2 + |hh|^2
  double cross = 0.0;  // |vh|^2 + |hv|^2
  double xpd() const { return co / cross; }
};
PolarPower polar_power(const cmat& dp);

/// (1 - beta) / beta
double configured_xpd(double beta);

}  // namespace dpris::validation::oracle
