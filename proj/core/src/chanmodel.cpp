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
#include "dpris/chanmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dpris::chanmodel {

double distance(const Point2& a, const Point2& b) { return std::hypot(b.x - a.x, b.y - a.y); }

double bearing(const Point2& from, const Point2& to) {
  const double d = distance(from, to);
  if (!(d > 0.0)) return 0.0;
  return std::asin(std::clamp((to.y - from.y) / d, -1.0, 1.0));
}

void Geometry::validate() const {
  if (!(ue_radius >= 0.0)) throw std::invalid_argument("geometry: ue_radius must be >= 0");
  for (double a : target_angles)
    if (!(std::abs(a) < kPi / 2)) throw std::invalid_argument("geometry: target angles must lie in (-pi/2, pi/2)");
  if (!(target_distance >= kReferenceDistance))
    throw std::invalid_argument("geometry: target distance below the reference distance");
  if (distance(bs_position, ris_position) < kReferenceDistance)
    throw std::invalid_argument("geometry: BS-RIS distance below the reference distance");
  if (distance(bs_position, ue_center) - ue_radius < kReferenceDistance ||
      distance(ris_position, ue_center) - ue_radius < kReferenceDistance)
    throw std::invalid_argument("geometry: UE disc reaches inside the reference distance");
}

void XpdProfile::validate() const {
  auto in_unit = [](double b) { return b >= 0.0 && b <= 1.0; };
  if (!(beta1_nlos > 0.0 && beta1_nlos <= 1.0)) throw std::invalid_argument("xpd: beta1_nlos must lie in (0, 1]");
  if (!in_unit(beta2_los) || !in_unit(beta2_nlos) || !in_unit(beta3_los) || !in_unit(beta3_nlos))
    throw std::invalid_argument("xpd: beta values must lie in [0, 1]");
  if (!(rician_factor >= 0.0)) throw std::invalid_argument("xpd: rician factor must be >= 0");
}

double xpd_to_beta(double xpd_db) { return 1.0 / (1.0 + std::pow(10.0, xpd_db / 10.0)); }

double path_loss_linear(double distance, double exponent) {
  if (!(distance >= kReferenceDistance))
    throw std::domain_error("path_loss_linear: distance " + std::to_string(distance) + " m below d0");
  const double pl_db = kReferenceLossDb - 10.0 * exponent * std::log10(distance / kReferenceDistance);
  return std::pow(10.0, pl_db / 10.0);
}

cvec steering_vector(double theta, Eigen::Index n, double spacing_ratio) {
  if (n < 1) throw std::domain_error("steering_vector: element count must be >= 1");
  cvec a(n);
  const double phase = -2.0 * kPi * spacing_ratio * std::sin(theta);
  a(0) = cd(1.0, 0.0);
  for (Eigen::Index m = 1; m < n; ++m) a(m) = std::polar(1.0, phase * static_cast<double>(m));
  return a;
}

cmat gen_direct_channel(Rng& rng, Eigen::Index n_t, double beta1_nlos, double pathloss) {
  const double co = std::sqrt(pathloss * (1.0 - beta1_nlos));
  const double cross = std::sqrt(pathloss * beta1_nlos);
  cmat h(2, 2 * n_t);
  h.block(0, 0, 1, n_t) = co * complex_gaussian(rng, 1, n_t);       // vv
  h.block(0, n_t, 1, n_t) = cross * complex_gaussian(rng, 1, n_t);  // vh
  h.block(1, 0, 1, n_t) = cross * complex_gaussian(rng, 1, n_t);    // hv
  h.block(1, n_t, 1, n_t) = co * complex_gaussian(rng, 1, n_t);     // hh
  return h;
}

namespace {

void check_los(const cmat& los, Eigen::Index rows, Eigen::Index cols) {
  if (los.rows() != rows || los.cols() != cols)
    throw std::domain_error("rician channel: LoS matrix is " + std::to_string(los.rows()) + "x" +
                            std::to_string(los.cols()) + ", expected " + std::to_string(rows) + "x" +
                            std::to_string(cols));
}

}  // namespace

cmat gen_rician_dp_channel(Rng& rng, Eigen::Index rows, Eigen::Index cols, double beta_los, double beta_nlos,
                           double omega, const cmat& los, double pathloss) {
  check_los(los, rows, cols);
  const double w_los = std::sqrt(omega / (omega + 1.0));
  const double w_nlos = std::sqrt(1.0 / (omega + 1.0));
  const cmat nlos = complex_gaussian(rng, rows, cols);

  const cmat co = w_los * std::sqrt(1.0 - beta_los) * los + w_nlos * std::sqrt(1.0 - beta_nlos) * nlos;
  const cmat cross = w_los * std::sqrt(beta_los) * los + w_nlos * std::sqrt(beta_nlos) * nlos;

  const double amp = std::sqrt(pathloss);
  cmat out(2 * rows, 2 * cols);
  out.block(0, 0, rows, cols) = amp * co;        // vv
  out.block(0, cols, rows, cols) = amp * cross;  // vh
  out.block(rows, 0, rows, cols) = amp * cross;  // hv
  out.block(rows, cols, rows, cols) = amp * co;  // hh
  return out;
}

cmat gen_rician_sp_channel(Rng& rng, Eigen::Index rows, Eigen::Index cols, double beta_los, double beta_nlos,
                           double omega, const cmat& los, double pathloss) {
  check_los(los, rows, cols);
  const double w_los = std::sqrt(omega / (omega + 1.0));
  const double w_nlos = std::sqrt(1.0 / (omega + 1.0));
  const cmat nlos = complex_gaussian(rng, rows, cols);
  const cmat co = w_los * std::sqrt(1.0 - beta_los) * los + w_nlos * std::sqrt(1.0 - beta_nlos) * nlos;
  return std::sqrt(pathloss) * co;
}

TargetResponses target_responses(const Geometry& geometry, Eigen::Index n_r, Eigen::Index n_t,
                                 double spacing_ratio, double eta1, double eta2) {
  TargetResponses t;
  const double th1 = geometry.target_angles[0];
  const double th2 = geometry.target_angles[1];
  t.a1 = steering_vector(th1, n_r, spacing_ratio) * steering_vector(th1, n_t, spacing_ratio).adjoint();
  t.a2 = steering_vector(th2, n_r, spacing_ratio) * steering_vector(th2, n_t, spacing_ratio).adjoint();
  t.v1 = eta1 * t.a1;
  t.v2 = eta2 * t.a2;
  t.vtil1 = cmat::Zero(n_r, 2 * n_t);
  t.vtil2 = cmat::Zero(n_r, 2 * n_t);
  t.vtil1.leftCols(n_t) = t.v1;
  t.vtil2.rightCols(n_t) = t.v2;
  return t;
}

TargetResponses target_responses_sp(const Geometry& geometry, Eigen::Index n_r, Eigen::Index n_elements,
                                    double spacing_ratio, double eta1, double eta2) {
  TargetResponses t;
  const double th1 = geometry.target_angles[0];
  const double th2 = geometry.target_angles[1];
  t.a1 = steering_vector(th1, n_r, spacing_ratio) * steering_vector(th1, n_elements, spacing_ratio).adjoint();
  t.a2 = steering_vector(th2, n_r, spacing_ratio) * steering_vector(th2, n_elements, spacing_ratio).adjoint();
  t.v1 = eta1 * t.a1;
  t.v2 = eta2 * t.a2;
  t.vtil1 = t.v1;
  t.vtil2 = t.v2;
  return t;
}

Point2 draw_ue_position(Rng& rng, const Geometry& geometry) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double r = geometry.ue_radius * std::sqrt(uni(rng));
  const double phi = 2.0 * kPi * uni(rng);
  return {geometry.ue_center.x + r * std::cos(phi), geometry.ue_center.y + r * std::sin(phi)};
}

namespace {

struct LinkAngles {
  double aod_bs_ris, aoa_ris_bs, aod_ris_ue, aoa_ue_ris;
};

LinkAngles link_angles(const Geometry& g) {
  return {bearing(g.bs_position, g.ris_position), bearing(g.ris_position, g.bs_position),
          bearing(g.ris_position, g.ue_center), bearing(g.ue_center, g.ris_position)};
}

}  // namespace

ChannelSet generate_dp_channels(Rng& rng, const ChannelParams& p) {
  p.geometry.validate();
  p.xpd.validate();
  const auto& geo = p.geometry;
  const auto ang = link_angles(geo);

  ChannelSet cs;
  cs.mode = ArrayMode::dual_polarized;
  for (Eigen::Index k = 0; k < p.k; ++k) cs.ue_positions.push_back(draw_ue_position(rng, geo));

  for (Eigen::Index k = 0; k < p.k; ++k) {
    const double pl = path_loss_linear(distance(geo.bs_position, cs.ue_positions[k]), p.exponent_bs_ue);
    cs.h_d.push_back(gen_direct_channel(rng, p.n_t, p.xpd.beta1_nlos, pl));
  }

  const cmat g_los = steering_vector(ang.aoa_ris_bs, p.l, p.spacing_ratio) *
                     steering_vector(ang.aod_bs_ris, p.n_t, p.spacing_ratio).adjoint();
  const double pl_g = path_loss_linear(distance(geo.bs_position, geo.ris_position), p.exponent_bs_ris);
  cs.g = gen_rician_dp_channel(rng, p.l, p.n_t, p.xpd.beta2_los, p.xpd.beta2_nlos, p.xpd.rician_factor, g_los,
                               pl_g);

  const cmat hr_los = steering_vector(ang.aod_ris_ue, p.l, p.spacing_ratio).adjoint();
  for (Eigen::Index k = 0; k < p.k; ++k) {
    const double pl = path_loss_linear(distance(geo.ris_position, cs.ue_positions[k]), p.exponent_ris_ue);
    cs.h_r.push_back(gen_rician_dp_channel(rng, 1, p.l, p.xpd.beta3_los, p.xpd.beta3_nlos, p.xpd.rician_factor,
                                           hr_los, pl));
  }

  cs.targets = target_responses(geo, p.n_r, p.n_t, p.spacing_ratio, p.eta1, p.eta2);
  return cs;
}

ChannelSet gen_sp_channels(Rng& rng, const ChannelParams& p, SpScale scale) {
  p.geometry.validate();
  p.xpd.validate();
  const auto& geo = p.geometry;
  const auto ang = link_angles(geo);
  const Eigen::Index mult = scale == SpScale::x2 ? 2 : 1;
  const Eigen::Index n_bs = mult * p.n_t;
  const Eigen::Index n_ris = mult * p.l;
  const Eigen::Index n_ue = mult;

  ChannelSet cs;
  cs.mode = scale == SpScale::x2 ? ArrayMode::single_2x : ArrayMode::single_1x;
  for (Eigen::Index k = 0; k < p.k; ++k) cs.ue_positions.push_back(draw_ue_position(rng, geo));

  for (Eigen::Index k = 0; k < p.k; ++k) {
    const double pl = path_loss_linear(distance(geo.bs_position, cs.ue_positions[k]), p.exponent_bs_ue);
    cs.h_d.push_back(std::sqrt(pl * (1.0 - p.xpd.beta1_nlos)) * complex_gaussian(rng, n_ue, n_bs));
  }

  const cmat g_los = steering_vector(ang.aoa_ris_bs, n_ris, p.spacing_ratio) *
                     steering_vector(ang.aod_bs_ris, n_bs, p.spacing_ratio).adjoint();
  const double pl_g = path_loss_linear(distance(geo.bs_position, geo.ris_position), p.exponent_bs_ris);
  cs.g = gen_rician_sp_channel(rng, n_ris, n_bs, p.xpd.beta2_los, p.xpd.beta2_nlos, p.xpd.rician_factor, g_los,
                               pl_g);

  const cmat hr_los = steering_vector(ang.aoa_ue_ris, n_ue, p.spacing_ratio) *
                      steering_vector(ang.aod_ris_ue, n_ris, p.spacing_ratio).adjoint();
  for (Eigen::Index k = 0; k < p.k; ++k) {
    const double pl = path_loss_linear(distance(geo.ris_position, cs.ue_positions[k]), p.exponent_ris_ue);
    cs.h_r.push_back(gen_rician_sp_channel(rng, n_ue, n_ris, p.xpd.beta3_los, p.xpd.beta3_nlos,
                                           p.xpd.rician_factor, hr_los, pl));
  }

  cs.targets = target_responses_sp(geo, p.n_r, n_bs, p.spacing_ratio, p.eta1, p.eta2);
  return cs;
}

ChannelSet generate_channels(Rng& rng, const ChannelParams& params, ArrayMode mode) {
  switch (mode) {
    case ArrayMode::dual_polarized: return generate_dp_channels(rng, params);
    case ArrayMode::single_1x: return gen_sp_channels(rng, params, SpScale::x1);
    case ArrayMode::single_2x: return gen_sp_channels(rng, params, SpScale::x2);
  }
  throw std::invalid_argument("generate_channels: unknown array mode");
}

}  // namespace dpris::chanmodel
