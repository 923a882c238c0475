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

#include "dpris/linalg.hpp"
#include "dpris/rng.hpp"

#include <cmath>
#include <vector>

namespace dpris::chanmodel {

inline constexpr double kReferenceDistance = 1.0;   // d0 [m]
inline constexpr double kReferenceLossDb = -30.0;   // PL0 [dB]

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point2& a, const Point2& b);

/// Angle of `to` as seen from a linear array at `from`. All arrays lie along
/// the y-axis with broadside towards +x, so sin(theta) = dy / distance.
double bearing(const Point2& from, const Point2& to);

struct Geometry {
  Point2 bs_position{0.0, 0.0};
  Point2 ris_position{10.0, 0.0};
  Point2 ue_center{0.0, -70.0};
  double ue_radius = 5.0;
  double target_angles[2] = {-20.0 * kPi / 180.0, 40.0 * kPi / 180.0};
  double target_distance = 100.0;

  /// Throws std::invalid_argument on a broken invariant.
  void validate() const;
};

/// Polarization leakage parameters of the three link families.
struct XpdProfile {
  double beta1_nlos = 0.2403;  // BS -> UE (Rayleigh)
  double beta2_los = 0.1368;   // BS -> RIS
  double beta2_nlos = 0.2403;
  double beta3_los = 0.1368;   // RIS -> UE
  double beta3_nlos = 0.2403;
  double rician_factor = 2.5;

  double omega_los() const { return std::sqrt(rician_factor / (rician_factor + 1.0)); }
  double omega_nlos() const { return std::sqrt(1.0 / (rician_factor + 1.0)); }

  void validate() const;
};

/// Port layout of a simulated system.
///  - dual_polarized: N_t DP antennas (2N_t ports), L DP RIS elements with the
///    full 2L x 2L four-diagonal-block phase matrix, DP users (2 ports).
///  - single_1x: N_t SP antennas, L SP RIS elements (diagonal phase), 1-port users.
///  - single_2x: 2N_t SP antennas, 2L SP RIS elements (diagonal phase), 2-port users.
enum class ArrayMode { dual_polarized, single_1x, single_2x };

/// How the RIS phase vector maps onto the reflection matrix.
enum class PhaseLayout { dual_polarized, diagonal };

inline PhaseLayout layout_of(ArrayMode mode) {
  return mode == ArrayMode::dual_polarized ? PhaseLayout::dual_polarized : PhaseLayout::diagonal;
}

/// Everything needed to synthesize one channel realization.
struct ChannelParams {
  Eigen::Index n_t = 6;
  Eigen::Index n_r = 6;
  Eigen::Index l = 10;
  Eigen::Index k = 3;
  Geometry geometry;
  XpdProfile xpd;
  double exponent_bs_ris = 2.25;
  double exponent_ris_ue = 2.25;
  double exponent_bs_ue = 4.75;
  double spacing_ratio = 0.5;
  double eta1 = 1.0;
  double eta2 = 1.0;
};

struct TargetResponses {
  cmat a1, a2;      // N_r x N_bs-elements point-target responses
  cmat v1, v2;      // eta_i * A_i
  cmat vtil1, vtil2;  // polarization-masked responses acting on the full port vector
};

/// Channel bundle of one realization. For the dual-polarized mode the shapes
/// are H_d: 2 x 2N_t, G: 2L x 2N_t, H_r: 2 x 2L; single-polarized modes use
/// the port counts of their ArrayMode.
struct ChannelSet {
  ArrayMode mode = ArrayMode::dual_polarized;
  std::vector<cmat> h_d;
  cmat g;
  std::vector<cmat> h_r;
  TargetResponses targets;
  std::vector<Point2> ue_positions;

  PhaseLayout layout() const { return layout_of(mode); }
  Eigen::Index users() const { return static_cast<Eigen::Index>(h_d.size()); }
  Eigen::Index bs_ports() const { return g.cols(); }
  Eigen::Index ris_ports() const { return g.rows(); }
  Eigen::Index ue_ports() const { return h_d.empty() ? 0 : h_d.front().rows(); }
  /// RIS element count L (a DP element carries two ports).
  Eigen::Index ris_elements() const {
    return mode == ArrayMode::dual_polarized ? g.rows() / 2 : g.rows();
  }
};

/// beta = 1 / (1 + 10^(xpd_db / 10)), so that XPD = (1 - beta) / beta.
double xpd_to_beta(double xpd_db);

/// 10^((PL0 - 10 alpha log10(d / d0)) / 10). Throws std::domain_error for d < d0.
double path_loss_linear(double distance, double exponent);

/// ULA response: entry m is exp(-j 2 pi (d/lambda) m sin(theta)).
cvec steering_vector(double theta, Eigen::Index n, double spacing_ratio);

/// Rayleigh DP direct link, 2 x 2N_t. Blocks are drawn vv, vh, hv, hh.
cmat gen_direct_channel(Rng& rng, Eigen::Index n_t, double beta1_nlos, double pathloss);

/// Rician DP link, 2rows x 2cols, with LoS and NLoS components shared by all
/// four polarization blocks. One rows x cols NLoS draw per call.
cmat gen_rician_dp_channel(Rng& rng, Eigen::Index rows, Eigen::Index cols, double beta_los, double beta_nlos,
                           double omega, const cmat& los, double pathloss);

/// Single-polarized Rician link keeping only the co-polar coefficients.
cmat gen_rician_sp_channel(Rng& rng, Eigen::Index rows, Eigen::Index cols, double beta_los, double beta_nlos,
                           double omega, const cmat& los, double pathloss);

/// Target responses of the DP array: A_i = a_Nr(theta_i) a_Nt(theta_i)^H,
/// V_i = eta_i A_i, Vtil_1 = V_1 [I 0], Vtil_2 = V_2 [0 I].
TargetResponses target_responses(const Geometry& geometry, Eigen::Index n_r, Eigen::Index n_t,
                                 double spacing_ratio, double eta1, double eta2);

/// Target responses of a single-polarized array with `n_elements` transmit
/// elements. No polarization mask: Vtil_i = V_i.
TargetResponses target_responses_sp(const Geometry& geometry, Eigen::Index n_r, Eigen::Index n_elements,
                                    double spacing_ratio, double eta1, double eta2);

/// Uniform draw inside the UE disc.
Point2 draw_ue_position(Rng& rng, const Geometry& geometry);

/// One DP realization. Draw order: UE positions 1..K, H_d users 1..K, G, H_r users 1..K.
ChannelSet generate_dp_channels(Rng& rng, const ChannelParams& params);

enum class SpScale { x1, x2 };

/// One SP baseline realization with the same draw order as the DP generator.
ChannelSet gen_sp_channels(Rng& rng, const ChannelParams& params, SpScale scale);

/// Dispatch on the array mode.
ChannelSet generate_channels(Rng& rng, const ChannelParams& params, ArrayMode mode);

}  // namespace dpris::chanmodel
