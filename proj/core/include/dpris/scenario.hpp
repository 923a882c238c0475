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
#include "dpris/precopt.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace dpris {

/// Raised for malformed or unknown configuration entries.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverSettings {
  double ao_eps = 1e-3;  // on max(||dPhi||_F, ||dF||_F)
  int ao_max_iter = 30;
  double mm_tol = 1e-6;
  int mm_max_iter = 200;
  precopt::PenaltyOptions penalty;
};

/// Full experiment configuration.
struct Scenario {
  ArrayMode mode = ArrayMode::dual_polarized;
  Eigen::Index n_t = 6;
  Eigen::Index n_r = 6;
  Eigen::Index l = 10;
  Eigen::Index k = 3;
  double p0 = 1.0;  // W
  double bandwidth = 10e6;         // Hz
  double noise_density = -174.0;   // dBm/Hz
  std::optional<double> sigma2;    // W, derived from the noise density when unset
  std::optional<double> sigma_r2;  // W, equal to sigma2 when unset
  double rician_factor = 2.5;
  double xpd_los_db = 8.0;
  double xpd_nlos_db = 5.0;
  double exponent_bs_ris = 2.25;
  double exponent_ris_ue = 2.25;
  double exponent_bs_ue = 4.75;
  double spacing_ratio = 0.5;
  chanmodel::Geometry geometry;
  double gamma1_th_db = 20.0;
  double gamma2_th_db = 20.0;
  /// Round-trip exponent of the target echo used for the default eta_i.
  double target_path_exponent = 4.525;
  std::optional<double> eta1;
  std::optional<double> eta2;
  SolverSettings solver;
  std::uint64_t seed = 1;
  int n_realizations = 50;

  double noise_power() const;
  double radar_noise_power() const;
  double eta(int target) const;  // target in {1, 2}
  double gamma_th(int target) const;  // linear
  SenseSpec sense_spec() const;
  chanmodel::ChannelParams channel_params() const;

  /// Throws ConfigError on a broken invariant.
  void validate() const;
};

/// Applies one `key = value` assignment. Throws ConfigError for unknown keys
/// or unparsable values.
void apply_setting(Scenario& scenario, const std::string& key, const std::string& value);

/// Reads `key = value` lines ('#' starts a comment) on top of `base`.
Scenario parse_config(std::istream& in, Scenario base = {});
Scenario load_config(const std::string& path, Scenario base = {});

std::string to_string(ArrayMode mode);
ArrayMode parse_mode(const std::string& text);

double db_to_linear(double db);

}  // namespace dpris
