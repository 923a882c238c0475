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

#include "dpris/scenario.hpp"
#include "dpris/solver.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dpris::experiments {

/// Rows of one CSV file. Cells are preformatted strings.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

struct Output {
  std::vector<std::pair<std::string, Table>> files;  // file name -> table

  const Table& file(const std::string& name) const;
};

struct Stats {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  std::size_t n = 0;
};

Stats summarize(std::span<const double> values);

/// Statistics of a - b for equally long, index-paired samples.
Stats paired_difference(std::span<const double> a, std::span<const double> b);

/// Sweep grids of the experiment runners.
struct SweepSpec {
  std::vector<Eigen::Index> convergence_l{10, 20, 40};
  std::vector<Eigen::Index> comparison_n_t{4, 6, 8, 10};
  std::vector<ArrayMode> comparison_modes{ArrayMode::single_1x, ArrayMode::dual_polarized, ArrayMode::single_2x};
  std::vector<Eigen::Index> quantization_n_t{6, 8};
  std::vector<ArrayMode> quantization_modes{ArrayMode::dual_polarized, ArrayMode::single_1x};
  Eigen::Index quantization_l = 40;
  std::vector<int> quantization_bits{0, 1, 2, 3, 4, 5, 6};  // 0 is the continuous phase
  std::vector<Eigen::Index> xpd_l{10, 20, 40};
  std::vector<std::pair<double, double>> xpd_pairs{{1, 4}, {3, 6}, {5, 8}, {7, 11}, {9, 13}, {11, 14}};
  std::vector<Eigen::Index> tradeoff_n_t{6, 8, 10};
  std::vector<double> tradeoff_gamma_db{20, 21, 22, 23, 24, 25, 26};
  double beam_step_deg = 0.5;
};


/// Runs `count` independent jobs on a small thread pool. Results must be
/// written to per-index slots by the job itself.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

/// One solved realization with the numbers the runners tabulate.
struct SolvedPoint {
  solver::SolveReport report;
  ChannelSet channels;
};

SolvedPoint solve_point(const Scenario& scenario, std::uint64_t realization);

struct RunOptions {
  int n_seeds = 0;  // 0: use scenario.n_realizations
  unsigned threads = 0;  // 0: hardware concurrency
  /// Called once per solve in job order after a sweep finishes.
  std::function<void(const Scenario&, std::uint64_t, const SolvedPoint&)> on_solved;
};

Output convergence(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt);
Output sp_comparison(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt);
Output quantization(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt);
Output xpd_sweep(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt);
Output snr_tradeoff(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt);
Output beampattern(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt);

const std::vector<std::string>& names();

/// Dispatch by name. Throws std::invalid_argument for an unknown name.
Output run(const std::string& name, const Scenario& base, const SweepSpec& sweep, const RunOptions& opt);

std::string format_double(double v);

}  // namespace dpris::experiments
