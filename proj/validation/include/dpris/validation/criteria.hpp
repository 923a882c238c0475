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

#include "dpris/experiments.hpp"
#include "dpris/scenario.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace dpris::validation {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  int seeds = 50;        // Monte-Carlo realizations per sweep point
  unsigned threads = 0;  // 0: hardware concurrency
  Scenario base;         // default scenario of every criterion
  std::function<void(const std::string&)> progress;  // optional log sink
};

/// Independent feasibility audit of solved points.
struct FeasibilityAudit {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t failures = 0;    // reports flagged as failed
  double worst_mismatch = 0.0;  // relative, reported vs recomputed metrics
  std::string first_violation;

  void check(const Scenario& scenario, const experiments::SolvedPoint& point);
};

/// Acceptance suite. Sweep criteria feed every solve they run into the
/// feasibility audit so that criterion 6 covers them.
class Suite {
 public:
  explicit Suite(SuiteOptions options);

  static const std::vector<int>& ids();
  /// Fast subset that needs no Monte-Carlo sweep.
  static const std::vector<int>& quick_ids();
  static std::string title(int id);

  CriterionResult run(int id);
  /// Runs the listed criteria, the feasibility audit last, and returns the
  /// results sorted by id.
  std::vector<CriterionResult> run_all(const std::vector<int>& ids);

 private:
  experiments::RunOptions run_options();
  void log(const std::string& line) const;

  SuiteOptions opt_;
  FeasibilityAudit audit_;
};

/// "[PASS] 7 title: detail (12.3 s)"
std::string format_result(const CriterionResult& result);

}  // namespace dpris::validation
