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
#include "dpris/experiments.hpp"
#include "dpris/scenario.hpp"
#include "dpris/solver.hpp"
#include "dpris/validation/criteria.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace dpris;

constexpr int kOk = 0;
constexpr int kSolverFailure = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string config;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int seeds = 0;
  std::string out;
  unsigned threads = 0;
  bool quiet = false;
  bool timing = false;
};

Scenario build_scenario(const Globals& g) {
  Scenario sc = g.config.empty() ? Scenario{} : load_config(g.config);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(sc, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed_set) sc.seed = g.seed;
  sc.validate();
  return sc;
}

std::string out_dir(const Globals& g) {
  if (!g.out.empty()) return g.out;
  if (const char* env = std::getenv("DPRIS_OUT_DIR"); env && *env) return env;
  return ".";
}

int cmd_solve(const Globals& g, std::uint64_t realization) {
  const Scenario sc = build_scenario(g);
  const auto rep = solver::solve_realization(sc, realization);
  const std::string json = solver::report_json(rep, sc, realization, g.timing);
  if (!g.out.empty() || std::getenv("DPRIS_OUT_DIR")) {
    const fs::path dir = out_dir(g);
    fs::create_directories(dir);
    std::ofstream(dir / "solve.json", std::ios::binary) << json << '\n';
    if (!g.quiet) std::cerr << "wrote " << (dir / "solve.json").string() << '\n';
  } else {
    std::cout << json << '\n';
  }
  if (rep.failed) {
    std::cerr << "solver failure: " << rep.failure << '\n';
    return kSolverFailure;
  }
  return kOk;
}

int cmd_experiment(const Globals& g, const std::string& name) {
  const Scenario sc = build_scenario(g);
  experiments::RunOptions ro;
  ro.n_seeds = g.seeds;
  ro.threads = g.threads;
  std::size_t failures = 0;
  ro.on_solved = [&](const Scenario&, std::uint64_t, const experiments::SolvedPoint& p) { failures += p.report.failed; };
  const auto out = experiments::run(name, sc, experiments::SweepSpec{}, ro);
  const fs::path dir = out_dir(g);
  fs::create_directories(dir);
  for (const auto& [file, table] : out.files) {
    table.write_csv((dir / file).string());
    if (!g.quiet) std::cerr << "wrote " << (dir / file).string() << " (" << table.rows.size() << " rows)\n";
  }
  if (failures > 0) {
    std::cerr << failures << " solve(s) failed; see the feasible column of the CSV\n";
    return kSolverFailure;
  }
  return kOk;
}

int cmd_validate(const Globals& g, bool full, const std::vector<int>& only) {
  validation::SuiteOptions so;
  so.base = build_scenario(g);
  so.threads = g.threads;
  if (g.seeds > 0) so.seeds = g.seeds;
  if (!g.quiet) so.progress = [](const std::string& line) { std::cerr << line << '\n'; };
  validation::Suite suite(so);
  const auto& ids = !only.empty() ? only : (full ? validation::Suite::ids() : validation::Suite::quick_ids());
  bool all = true;
  for (const auto& r : suite.run_all(ids)) {
    std::cout << validation::format_result(r) << '\n';
    all = all && r.passed;
  }
  return all ? kOk : kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-polarized RIS-aided ISAC optimizer"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "key = value scenario file")->check(CLI::ExistingFile);
  app.add_option("--set", g.overrides, "scenario override key=value (repeatable)");
  auto* seed_opt = app.add_option("--seed", g.seed, "base RNG seed");
  app.add_option("--seeds", g.seeds, "Monte-Carlo realizations per sweep point")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output directory (default $DPRIS_OUT_DIR or .)");
  app.add_option("--threads", g.threads, "worker threads (0: all cores)");
  app.add_flag("--quiet", g.quiet, "suppress progress on stderr");
  app.add_flag("--timing", g.timing, "include wall time in solve JSON");

  std::uint64_t realization = 0;
  auto* solve = app.add_subcommand("solve", "solve one realization and print the report as JSON");
  solve->add_option("--realization", realization, "realization index");

  std::string name;
  auto* experiment = app.add_subcommand("experiment", "run a sweep and write its CSV files");
  experiment->add_option("name", name, "experiment name")
      ->required()
      ->check(CLI::IsMember(dpris::experiments::names()));

  bool full = false;
  std::vector<int> only;
  auto* validate = app.add_subcommand("validate", "run the oracle and property suite");
  validate->add_flag("--full", full, "include the Monte-Carlo sweep criteria");
  validate->add_option("--only", only, "criterion ids to run")->check(CLI::Range(1, 12));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  g.seed_set = seed_opt->count() > 0;

  try {
    if (*solve) return cmd_solve(g, realization);
    if (*experiment) return cmd_experiment(g, name);
    if (*validate) return cmd_validate(g, full, only);
  } catch (const dpris::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kUsage;
}
