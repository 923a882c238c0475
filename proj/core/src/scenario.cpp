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
#include "dpris/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace dpris {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(out))
    throw ConfigError("config: '" + key + "' expects a finite number, got '" + v + "'");
  return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

using Setter = std::function<void(Scenario&, const std::string&, const std::string&)>;

template <class T>
Setter real(T Scenario::*field) {
  return [field](Scenario& s, const std::string& k, const std::string& v) { s.*field = parse_double(k, v); };
}

Setter count(Eigen::Index Scenario::*field) {
  return [field](Scenario& s, const std::string& k, const std::string& v) {
    s.*field = parse_int<Eigen::Index>(k, v);
  };
}

Setter deg(double& (*pick)(Scenario&)) {
  return [pick](Scenario& s, const std::string& k, const std::string& v) {
    pick(s) = parse_double(k, v) * kPi / 180.0;
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["mode"] = [](Scenario& s, const std::string&, const std::string& v) { s.mode = parse_mode(v); };
    t["n_t"] = count(&Scenario::n_t);
    t["n_r"] = count(&Scenario::n_r);
    t["l"] = count(&Scenario::l);
    t["k"] = count(&Scenario::k);
    t["p0"] = real(&Scenario::p0);
    t["bandwidth"] = real(&Scenario::bandwidth);
    t["noise_density"] = real(&Scenario::noise_density);
    t["sigma2"] = [](Scenario& s, const std::string& k, const std::string& v) { s.sigma2 = parse_double(k, v); };
    t["sigma_r2"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.sigma_r2 = parse_double(k, v);
    };
    t["rician_factor"] = real(&Scenario::rician_factor);
    t["xpd_los_db"] = real(&Scenario::xpd_los_db);
    t["xpd_nlos_db"] = real(&Scenario::xpd_nlos_db);
    t["exponent_bs_ris"] = real(&Scenario::exponent_bs_ris);
    t["exponent_ris_ue"] = real(&Scenario::exponent_ris_ue);
    t["exponent_bs_ue"] = real(&Scenario::exponent_bs_ue);
    t["spacing_ratio"] = real(&Scenario::spacing_ratio);
    t["gamma1_th_db"] = real(&Scenario::gamma1_th_db);
    t["gamma2_th_db"] = real(&Scenario::gamma2_th_db);
    t["gamma_th_db"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.gamma1_th_db = s.gamma2_th_db = parse_double(k, v);
    };
    t["target_path_exponent"] = real(&Scenario::target_path_exponent);
    t["eta1"] = [](Scenario& s, const std::string& k, const std::string& v) { s.eta1 = parse_double(k, v); };
    t["eta2"] = [](Scenario& s, const std::string& k, const std::string& v) { s.eta2 = parse_double(k, v); };
    t["bs_x"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.geometry.bs_position.x = parse_double(k, v);
    };
    t["bs_y"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.geometry.bs_position.y = parse_double(k, v);
    };
    t["ris_x"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.geometry.ris_position.x = parse_double(k, v);
    };
    t["ris_y"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.geometry.ris_position.y = parse_double(k, v);
    };
    t["ue_x"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.geometry.ue_center.x = parse_double(k, v);
    };
    t["ue_y"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.geometry.ue_center.y = parse_double(k, v);
    };
    t["ue_radius"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.geometry.ue_radius = parse_double(k, v);
    };
    t["target1_deg"] = deg([](Scenario& s) -> double& { return s.geometry.target_angles[0]; });
    t["target2_deg"] = deg([](Scenario& s) -> double& { return s.geometry.target_angles[1]; });
    t["target_distance"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.geometry.target_distance = parse_double(k, v);
    };
    t["ao_eps"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.solver.ao_eps = parse_double(k, v);
    };
    t["ao_max_iter"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.solver.ao_max_iter = parse_int<int>(k, v);
    };
    t["mm_tol"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.solver.mm_tol = parse_double(k, v);
    };
    t["mm_max_iter"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.solver.mm_max_iter = parse_int<int>(k, v);
    };
    t["rho0"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.solver.penalty.rho0 = parse_double(k, v);
    };
    t["penalty_c"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.solver.penalty.c = parse_double(k, v);
    };
    t["xi_tol"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.solver.penalty.xi_tol = parse_double(k, v);
    };
    t["eps_tol"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.solver.penalty.eps_tol = parse_double(k, v);
    };
    t["max_outer"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.solver.penalty.max_outer = parse_int<int>(k, v);
    };
    t["max_inner"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.solver.penalty.max_inner = parse_int<int>(k, v);
    };
    t["seed"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.seed = parse_int<std::uint64_t>(k, v);
    };
    t["n_realizations"] = [](Scenario& s, const std::string& k, const std::string& v) {
      s.n_realizations = parse_int<int>(k, v);
    };
    return t;
  }();
  return table;
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string to_string(ArrayMode mode) {
  switch (mode) {
    case ArrayMode::dual_polarized: return "dp";
    case ArrayMode::single_1x: return "sp1x";
    case ArrayMode::single_2x: return "sp2x";
  }
  return "?";
}

ArrayMode parse_mode(const std::string& text) {
  if (text == "dp") return ArrayMode::dual_polarized;
  if (text == "sp1x") return ArrayMode::single_1x;
  if (text == "sp2x") return ArrayMode::single_2x;
  throw ConfigError("config: unknown mode '" + text + "' (expected dp, sp1x or sp2x)");
}

double Scenario::noise_power() const {
  if (sigma2) return *sigma2;
  return std::pow(10.0, (noise_density + 10.0 * std::log10(bandwidth) - 30.0) / 10.0);
}

double Scenario::radar_noise_power() const { return sigma_r2 ? *sigma_r2 : noise_power(); }

double Scenario::eta(int target) const {
  const auto& set = target == 1 ? eta1 : eta2;
  if (set) return *set;
  return std::sqrt(chanmodel::path_loss_linear(geometry.target_distance, target_path_exponent));
}

double Scenario::gamma_th(int target) const { return db_to_linear(target == 1 ? gamma1_th_db : gamma2_th_db); }

SenseSpec Scenario::sense_spec() const { return {gamma_th(1), gamma_th(2), radar_noise_power()}; }

chanmodel::ChannelParams Scenario::channel_params() const {
  chanmodel::ChannelParams p;
  p.n_t = n_t;
  p.n_r = n_r;
  p.l = l;
  p.k = k;
  p.geometry = geometry;
  const double b_los = chanmodel::xpd_to_beta(xpd_los_db);
  const double b_nlos = chanmodel::xpd_to_beta(xpd_nlos_db);
  p.xpd.beta1_nlos = b_nlos;
  p.xpd.beta2_los = b_los;
  p.xpd.beta2_nlos = b_nlos;
  p.xpd.beta3_los = b_los;
  p.xpd.beta3_nlos = b_nlos;
  p.xpd.rician_factor = rician_factor;
  p.exponent_bs_ris = exponent_bs_ris;
  p.exponent_ris_ue = exponent_ris_ue;
  p.exponent_bs_ue = exponent_bs_ue;
  p.spacing_ratio = spacing_ratio;
  p.eta1 = eta(1);
  p.eta2 = eta(2);
  return p;
}

void Scenario::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("config: ") + what);
  };
  need(n_t >= 1 && n_r >= 1 && l >= 1 && k >= 1, "n_t, n_r, l and k must be positive");
  need(p0 > 0.0, "p0 must be positive");
  need(bandwidth > 0.0, "bandwidth must be positive");
  need(noise_power() > 0.0 && radar_noise_power() > 0.0, "noise powers must be positive");
  need(rician_factor >= 0.0, "rician_factor must be non-negative");
  need(spacing_ratio > 0.0, "spacing_ratio must be positive");
  need(eta(1) >= 0.0 && eta(2) >= 0.0, "eta must be non-negative");
  need(solver.ao_eps > 0.0 && solver.ao_max_iter >= 1, "ao_eps > 0 and ao_max_iter >= 1 required");
  need(solver.mm_tol >= 0.0 && solver.mm_max_iter >= 1, "mm_tol >= 0 and mm_max_iter >= 1 required");
  need(solver.penalty.rho0 > 0.0, "rho0 must be positive");
  need(solver.penalty.c > 0.0 && solver.penalty.c < 1.0, "penalty_c must lie in (0, 1)");
  need(solver.penalty.max_outer >= 1 && solver.penalty.max_inner >= 1, "max_outer and max_inner must be >= 1");
  need(n_realizations >= 1, "n_realizations must be >= 1");
  try {
    geometry.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

void apply_setting(Scenario& scenario, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("config: unknown key '" + key + "'");
  it->second(scenario, key, value);
}

Scenario parse_config(std::istream& in, Scenario base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    apply_setting(base, key, value);
  }
  base.validate();
  return base;
}

Scenario load_config(const std::string& path, Scenario base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in, std::move(base));
}

}  // namespace dpris
