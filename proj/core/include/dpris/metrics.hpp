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
#include "dpris/linalg.hpp"
#include "dpris/rng.hpp"

#include <span>
#include <vector>

namespace dpris {

using chanmodel::ArrayMode;
using chanmodel::ChannelSet;
using chanmodel::PhaseLayout;

/// RIS reflection coefficients.
///
/// For PhaseLayout::dual_polarized the vector holds 4L entries ordered
/// [phi_vv; phi_hv; phi_vh; phi_hh]: segment s sits in block row (s & 1) and
/// block column (s >> 1) of the 2L x 2L matrix, i.e. the segments follow the
/// column-major order of the 2 x 2 block grid. For PhaseLayout::diagonal the
/// vector is the diagonal of the reflection matrix.
struct RisPhase {
  PhaseLayout layout = PhaseLayout::dual_polarized;
  Eigen::Index elements = 0;  // L
  cvec phi;

  static RisPhase ones(PhaseLayout layout, Eigen::Index elements);
  static RisPhase random(Rng& rng, PhaseLayout layout, Eigen::Index elements);

  /// Number of free coefficients (4L or L).
  static Eigen::Index coefficient_count(PhaseLayout layout, Eigen::Index elements) {
    return layout == PhaseLayout::dual_polarized ? 4 * elements : elements;
  }
  /// Side length of the reflection matrix (2L or L).
  Eigen::Index ports() const { return layout == PhaseLayout::dual_polarized ? 2 * elements : elements; }

  bool unit_modulus(double tol = 1e-9) const;
};

/// Row and column of coefficient j inside the reflection matrix.
struct PhaseSlot {
  Eigen::Index row;
  Eigen::Index col;
};
PhaseSlot phase_slot(PhaseLayout layout, Eigen::Index elements, Eigen::Index j);

struct PrecoderSet {
  std::vector<cmat> f;  // K matrices, N_bs x streams

  Eigen::Index users() const { return static_cast<Eigen::Index>(f.size()); }
  double total_power() const { return frob2_sum(f); }
  /// Sum_k F_k F_k^H
  cmat covariance() const { return gram_sum(f); }
};

struct EffectiveChannels {
  std::vector<cmat> h;  // H_k = H_d,k + H_r,k Phi G
};

struct SenseSpec {
  double gamma1_th = 100.0;  // linear
  double gamma2_th = 100.0;
  double sigma_r2 = 1.0;     // watts
};

namespace metrics {

/// Reflection matrix of a phase vector.
cmat expand_phase(const RisPhase& phase);

/// Inverse of expand_phase: reads the coefficients back off the matrix.
RisPhase collapse_phase(const cmat& phi_matrix, PhaseLayout layout);

/// H_k = H_d,k + H_r,k Phi G for every user.
EffectiveChannels compose_channels(const ChannelSet& channels, const RisPhase& phase);

/// Sum rate in nats/s/Hz with Gaussian signalling and treating inter-user
/// interference as noise.
double sum_rate(const EffectiveChannels& effective, const PrecoderSet& precoders, double sigma2);

/// Per-user rates in nats/s/Hz.
std::vector<double> user_rates(const EffectiveChannels& effective, const PrecoderSet& precoders, double sigma2);

/// MSE matrix of user k for receive filter U_k.
cmat mse_matrix(const cmat& h_k, const PrecoderSet& precoders, const cmat& u_k, double sigma2, Eigen::Index k);

/// Radar SNR sum_k tr(Vtil^H Vtil F_k F_k^H) / sigma_r2 (MVDR receiver).
double radar_snr(const PrecoderSet& precoders, const cmat& vtil, double sigma_r2);

struct BeamSample {
  double theta;  // radians
  double pv;     // |P_v|^2
  double ph;     // |P_h|^2
  double total;
};

/// Expected transmit beampattern per polarization. For the dual-polarized mode
/// the first half of the ports is vertical and the second half horizontal;
/// single-polarized arrays put all power in pv.
std::vector<BeamSample> beampattern(const PrecoderSet& precoders, std::span<const double> theta_grid,
                                    double spacing_ratio, ArrayMode mode);

}  // namespace metrics
}  // namespace dpris
