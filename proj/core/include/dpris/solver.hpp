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
#include "dpris/precopt.hpp"
#include "dpris/scenario.hpp"

#include <string>
#include <vector>

namespace dpris::solver {

/// Physical problem data consumed by the alternating optimizer.
struct AoConfig {
  double p0 = 1.0;
  double sigma2 = 1.0;
  SenseSpec sense;
  SolverSettings settings;
  bool optimize_phase = true;  // false: keep the initial phase and adapt only U, W, F
};

AoConfig make_config(const Scenario& scenario);

struct InitState {
  PrecoderSet precoders;
  RisPhase phase;
};

/// Uniform random phases and matched-filter precoders H_k^H scaled to total
/// power p0. Users whose composite channel vanishes get identity columns.
InitState init_state(const ChannelSet& channels, double p0, Rng& rng);

struct IterationRecord {
  int iteration = 0;                // 1-based
  double sum_rate = 0.0;            // nats/s/Hz after the iteration
  double wmmse_objective = 0.0;     // at the (U, W) of this iteration
  double delta = 0.0;               // max(||dPhi||_F, ||dF||_F)
  int mm_iterations = 0;
  bool mm_converged = false;
  int penalty_outer = 0;
  bool penalty_converged = false;
  precopt::Residuals residuals;     // of the last penalty outer iteration
  double power = 0.0;
  double gamma1 = 0.0;              // linear radar SNR
  double gamma2 = 0.0;
  std::vector<precopt::PenaltyOuterRecord> penalty_trace;
};

struct SolveReport {
  double initial_sum_rate = 0.0;
  std::vector<IterationRecord> iterations;
  int best_iteration = 0;  // iteration whose feasible iterate is reported, 0 if none
  RisPhase phase;
  PrecoderSet precoders;
  double sum_rate = 0.0;
  double power = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double power_slack = 0.0;   // p0 - power
  double gamma1_slack = 0.0;  // gamma1 - gamma1_th
  double gamma2_slack = 0.0;
  bool converged = false;     // delta < ao_eps before ao_max_iter
  bool feasible = false;
  bool failed = false;
  std::string failure;
  double wall_seconds = 0.0;

  std::vector<double> sum_rate_trace() const;
};

/// Alternating optimization: (U, W) update, MM phase step, penalty precoder
/// step, repeated until delta < ao_eps or ao_max_iter iterations.
/// Solver exceptions are caught and reported through `failed`.
SolveReport alternating_optimize(const ChannelSet& channels, const AoConfig& config, const InitState& init);

/// Generates realization `realization` of the scenario and solves it.
SolveReport solve_realization(const Scenario& scenario, std::uint64_t realization);

/// Power <= p0 (1 + 1e-6) and gamma_i >= gamma_i,th (1 - 1e-3).
bool report_feasible(double power, double gamma1, double gamma2, const AoConfig& config);

/// JSON rendering of a report. Wall time is omitted unless `timing` is set so
/// that repeated runs produce identical bytes.
std::string report_json(const SolveReport& report, const Scenario& scenario, std::uint64_t realization,
                        bool timing = false);

}  // namespace dpris::solver
