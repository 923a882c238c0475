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

#include "dpris/risopt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dpris::experiments {

namespace {

using Row = std::vector<std::string>;

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt_bool(bool v) { return v ? "1" : "0"; }

double to_db(double v) { return 10.0 * std::log10(std::max(v, 1e-300)); }

int seeds_of(const Scenario& s, const RunOptions& opt) { return opt.n_seeds > 0 ? opt.n_seeds : s.n_realizations; }

/// Solves every (scenario, realization) job and returns reports in job order.
std::vector<SolvedPoint> solve_all(const std::vector<std::pair<Scenario, std::uint64_t>>& jobs,
                                   const RunOptions& opt) {
  std::vector<SolvedPoint> out(jobs.size());
  parallel_for(jobs.size(), opt.threads,
               [&](std::size_t i) { out[i] = solve_point(jobs[i].first, jobs[i].second); });
  if (opt.on_solved)
    for (std::size_t i = 0; i < jobs.size(); ++i) opt.on_solved(jobs[i].first, jobs[i].second, out[i]);
  return out;
}

Row summary_cells(const Stats& st, std::size_t failures) {
  return {fmt(st.mean), fmt(st.se), fmt(static_cast<std::int64_t>(st.n)), fmt(static_cast<std::int64_t>(failures))};
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string Table::to_csv() const {
  std::ostringstream os;
  auto line = [&os](const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

void Table::write_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << to_csv();
}

const Table& Output::file(const std::string& name) const {
  for (const auto& [n, t] : files)
    if (n == name) return t;
  throw std::out_of_range("no output file '" + name + "'");
}

Stats summarize(std::span<const double> values) {
  Stats st;
  st.n = values.size();
  if (st.n == 0) return st;
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(st.n);
  if (st.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.se = std::sqrt(ss / static_cast<double>(st.n - 1) / static_cast<double>(st.n));
  }
  return st;
}

Stats paired_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_difference: sample sizes differ");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return summarize(d);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

SolvedPoint solve_point(const Scenario& scenario, std::uint64_t realization) {
  scenario.validate();
  auto rng = make_rng(scenario.seed, realization, Stream::channels);
  SolvedPoint p;
  p.channels = chanmodel::generate_channels(rng, scenario.channel_params(), scenario.mode);
  auto init_rng = make_rng(scenario.seed, realization, Stream::init);
  const auto init = solver::init_state(p.channels, scenario.p0, init_rng);
  p.report = solver::alternating_optimize(p.channels, solver::make_config(scenario), init);
  return p;
}

Output convergence(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt) {
  const int n = seeds_of(base, opt);
  std::vector<std::pair<Scenario, std::uint64_t>> jobs;
  for (auto l : sweep.convergence_l)
    for (int s = 0; s < n; ++s) {
      Scenario sc = base;
      sc.l = l;
      jobs.emplace_back(sc, s);
    }
  const auto solved = solve_all(jobs, opt);

  Table trace{{"l", "seed", "iteration", "sum_rate", "wmmse_objective", "delta"}, {}};
  Table penalty{{"l", "seed", "ao_iteration", "outer", "rho", "res_x", "res_y", "res_z", "objective", "inner"}, {}};
  Table summary{{"l", "iteration", "mean", "se", "n", "failures"}, {}};
  const int max_iter = base.solver.ao_max_iter;
  std::size_t j = 0;
  for (auto l : sweep.convergence_l) {
    std::vector<std::vector<double>> per_iter(max_iter + 1);
    std::size_t failures = 0;
    for (int s = 0; s < n; ++s, ++j) {
      const auto& rep = solved[j].report;
      failures += rep.failed;
      trace.rows.push_back({fmt(l), fmt(std::int64_t{s}), "0", fmt(rep.initial_sum_rate), "", ""});
      per_iter[0].push_back(rep.initial_sum_rate);
      double last = rep.initial_sum_rate;
      for (int it = 1; it <= max_iter; ++it) {
        if (it <= static_cast<int>(rep.iterations.size())) {
          const auto& r = rep.iterations[it - 1];
          trace.rows.push_back({fmt(l), fmt(std::int64_t{s}), fmt(std::int64_t{it}), fmt(r.sum_rate),
                                fmt(r.wmmse_objective), fmt(r.delta)});
          last = r.sum_rate;
        }
        // Converged runs hold their last value in the averaged curve.
        per_iter[it].push_back(last);
      }
      if (!rep.iterations.empty()) {
        const auto& first = rep.iterations.front();
        for (std::size_t o = 0; o < first.penalty_trace.size(); ++o) {
          const auto& p = first.penalty_trace[o];
          penalty.rows.push_back({fmt(l), fmt(std::int64_t{s}), "1", fmt(static_cast<std::int64_t>(o + 1)),
                                  fmt(p.rho), fmt(p.residuals.x), fmt(p.residuals.y), fmt(p.residuals.z),
                                  fmt(p.objective), fmt(std::int64_t{p.inner_iterations})});
        }
      }
    }
    for (int it = 0; it <= max_iter; ++it) {
      Row row{fmt(l), fmt(std::int64_t{it})};
      const auto cells = summary_cells(summarize(per_iter[it]), failures);
      row.insert(row.end(), cells.begin(), cells.end());
      summary.rows.push_back(std::move(row));
    }
  }
  return {{{"convergence.csv", trace}, {"convergence_penalty.csv", penalty}, {"convergence_summary.csv", summary}}};
}

Output sp_comparison(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt) {
  const int n = seeds_of(base, opt);
  std::vector<std::pair<Scenario, std::uint64_t>> jobs;
  for (auto nt : sweep.comparison_n_t)
    for (auto mode : sweep.comparison_modes)
      for (int s = 0; s < n; ++s) {
        Scenario sc = base;
        sc.n_t = nt;
        sc.mode = mode;
        jobs.emplace_back(sc, s);
      }
  const auto solved = solve_all(jobs, opt);

  Table rows{{"n_t", "mode", "seed", "sum_rate", "power", "gamma1_db", "gamma2_db", "feasible"}, {}};
  Table summary{{"n_t", "mode", "mean", "se", "n", "failures"}, {}};
  std::size_t j = 0;
  for (auto nt : sweep.comparison_n_t)
    for (auto mode : sweep.comparison_modes) {
      std::vector<double> rates;
      std::size_t failures = 0;
      for (int s = 0; s < n; ++s, ++j) {
        const auto& rep = solved[j].report;
        failures += rep.failed;
        rates.push_back(rep.sum_rate);
        rows.rows.push_back({fmt(nt), to_string(mode), fmt(std::int64_t{s}), fmt(rep.sum_rate), fmt(rep.power),
                             fmt(to_db(rep.gamma1)), fmt(to_db(rep.gamma2)), fmt_bool(rep.feasible)});
      }
      Row row{fmt(nt), to_string(mode)};
      const auto cells = summary_cells(summarize(rates), failures);
      row.insert(row.end(), cells.begin(), cells.end());
      summary.rows.push_back(std::move(row));
    }
  return {{{"sp_comparison.csv", rows}, {"sp_comparison_summary.csv", summary}}};
}

Output quantization(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt) {
  const int n = seeds_of(base, opt);
  std::vector<std::pair<Scenario, std::uint64_t>> jobs;
  for (auto nt : sweep.quantization_n_t)
    for (auto mode : sweep.quantization_modes)
      for (int s = 0; s < n; ++s) {
        Scenario sc = base;
        sc.n_t = nt;
        sc.l = sweep.quantization_l;
        sc.mode = mode;
        jobs.emplace_back(sc, s);
      }
  const auto solved = solve_all(jobs, opt);

  // Quantized phases are evaluated twice: with the precoders of the continuous
  // solve, and after re-optimizing (U, W, F) at the fixed quantized phase.
  struct Cell {
    double adapted = 0.0;
    double fixed = 0.0;
  };
  const auto& bits_list = sweep.quantization_bits;
  std::vector<Cell> cells(jobs.size() * bits_list.size());
  parallel_for(cells.size(), opt.threads, [&](std::size_t i) {
    const std::size_t j = i / bits_list.size();
    const int bits = bits_list[i % bits_list.size()];
    const auto& p = solved[j];
    if (bits <= 0 || p.report.failed) {
      cells[i] = {p.report.sum_rate, p.report.sum_rate};
      return;
    }
    const auto q = risopt::quantize_phase(p.report.phase, bits);
    auto cfg = solver::make_config(jobs[j].first);
    cfg.optimize_phase = false;
    cells[i].fixed = metrics::sum_rate(metrics::compose_channels(p.channels, q), p.report.precoders, cfg.sigma2);
    const auto re = solver::alternating_optimize(p.channels, cfg, {p.report.precoders, q});
    cells[i].adapted = re.failed ? cells[i].fixed : re.sum_rate;
  });

  Table rows{{"n_t", "mode", "bits", "seed", "sum_rate", "sum_rate_fixed_precoders"}, {}};
  Table summary{{"n_t", "mode", "bits", "mean", "se", "n", "failures"}, {}};
  std::size_t j0 = 0;
  for (auto nt : sweep.quantization_n_t)
    for (auto mode : sweep.quantization_modes) {
      std::size_t failures = 0;
      for (int s = 0; s < n; ++s) failures += solved[j0 + s].report.failed;
      for (std::size_t b = 0; b < bits_list.size(); ++b) {
        std::vector<double> rates;
        for (int s = 0; s < n; ++s) {
          const auto& c = cells[(j0 + s) * bits_list.size() + b];
          rates.push_back(c.adapted);
          rows.rows.push_back({fmt(nt), to_string(mode), fmt(std::int64_t{bits_list[b]}), fmt(std::int64_t{s}),
                               fmt(c.adapted), fmt(c.fixed)});
        }
        Row row{fmt(nt), to_string(mode), fmt(std::int64_t{bits_list[b]})};
        const auto sc = summary_cells(summarize(rates), failures);
        row.insert(row.end(), sc.begin(), sc.end());
        summary.rows.push_back(std::move(row));
      }
      j0 += n;
    }
  return {{{"quantization.csv", rows}, {"quantization_summary.csv", summary}}};
}

Output xpd_sweep(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt) {
  const int n = seeds_of(base, opt);
  std::vector<std::pair<Scenario, std::uint64_t>> jobs;
  for (auto l : sweep.xpd_l)
    for (const auto& [los, nlos] : sweep.xpd_pairs)
      for (int s = 0; s < n; ++s) {
        Scenario sc = base;
        sc.l = l;
        sc.xpd_los_db = los;
        sc.xpd_nlos_db = nlos;
        jobs.emplace_back(sc, s);
      }
  const auto solved = solve_all(jobs, opt);

  Table rows{{"l", "xpd_los_db", "xpd_nlos_db", "seed", "sum_rate", "feasible"}, {}};
  Table summary{{"l", "xpd_los_db", "xpd_nlos_db", "mean", "se", "n", "failures"}, {}};
  std::size_t j = 0;
  for (auto l : sweep.xpd_l)
    for (const auto& [los, nlos] : sweep.xpd_pairs) {
      std::vector<double> rates;
      std::size_t failures = 0;
      for (int s = 0; s < n; ++s, ++j) {
        const auto& rep = solved[j].report;
        failures += rep.failed;
        rates.push_back(rep.sum_rate);
        rows.rows.push_back(
            {fmt(l), fmt(los), fmt(nlos), fmt(std::int64_t{s}), fmt(rep.sum_rate), fmt_bool(rep.feasible)});
      }
      Row row{fmt(l), fmt(los), fmt(nlos)};
      const auto cells = summary_cells(summarize(rates), failures);
      row.insert(row.end(), cells.begin(), cells.end());
      summary.rows.push_back(std::move(row));
    }
  return {{{"xpd_sweep.csv", rows}, {"xpd_sweep_summary.csv", summary}}};
}

Output snr_tradeoff(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt) {
  const int n = seeds_of(base, opt);
  std::vector<std::pair<Scenario, std::uint64_t>> jobs;
  for (auto nt : sweep.tradeoff_n_t)
    for (double g : sweep.tradeoff_gamma_db)
      for (int s = 0; s < n; ++s) {
        Scenario sc = base;
        sc.n_t = nt;
        sc.gamma1_th_db = sc.gamma2_th_db = g;
        jobs.emplace_back(sc, s);
      }
  const auto solved = solve_all(jobs, opt);

  Table rows{{"n_t", "gamma_th_db", "seed", "sum_rate", "gamma1_db", "gamma2_db", "feasible"}, {}};
  Table summary{{"n_t", "gamma_th_db", "mean", "se", "n", "failures"}, {}};
  std::size_t j = 0;
  for (auto nt : sweep.tradeoff_n_t)
    for (double g : sweep.tradeoff_gamma_db) {
      std::vector<double> rates;
      std::size_t failures = 0;
      for (int s = 0; s < n; ++s, ++j) {
        const auto& rep = solved[j].report;
        failures += rep.failed;
        rates.push_back(rep.sum_rate);
        rows.rows.push_back({fmt(nt), fmt(g), fmt(std::int64_t{s}), fmt(rep.sum_rate), fmt(to_db(rep.gamma1)),
                             fmt(to_db(rep.gamma2)), fmt_bool(rep.feasible)});
      }
      Row row{fmt(nt), fmt(g)};
      const auto cells = summary_cells(summarize(rates), failures);
      row.insert(row.end(), cells.begin(), cells.end());
      summary.rows.push_back(std::move(row));
    }
  return {{{"snr_tradeoff.csv", rows}, {"snr_tradeoff_summary.csv", summary}}};
}

Output beampattern(const Scenario& base, const SweepSpec& sweep, const RunOptions& opt) {
  const auto p = std::move(solve_all({{base, 0}}, opt).front());
  if (!(sweep.beam_step_deg > 0.0)) throw std::invalid_argument("beampattern: step must be positive");
  const int steps = static_cast<int>(std::lround(180.0 / sweep.beam_step_deg));
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) grid.push_back((-90.0 + i * sweep.beam_step_deg) * kPi / 180.0);
  const auto samples = metrics::beampattern(p.report.precoders, grid, base.spacing_ratio, base.mode);
  Table t{{"angle_deg", "pv", "ph", "ptotal"}, {}};
  for (const auto& b : samples)
    t.rows.push_back({fmt(b.theta * 180.0 / kPi), fmt(b.pv), fmt(b.ph), fmt(b.total)});
  return {{{"beampattern.csv", t}}};
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"convergence",  "sp_comparison", "quantization",
                                          "xpd_sweep",    "snr_tradeoff",  "beampattern"};
  return n;
}

Output run(const std::string& name, const Scenario& base, const SweepSpec& sweep, const RunOptions& opt) {
  if (name == "convergence") return convergence(base, sweep, opt);
  if (name == "sp_comparison") return sp_comparison(base, sweep, opt);
  if (name == "quantization") return quantization(base, sweep, opt);
  if (name == "xpd_sweep") return xpd_sweep(base, sweep, opt);
  if (name == "snr_tradeoff") return snr_tradeoff(base, sweep, opt);
  if (name == "beampattern") return beampattern(base, sweep, opt);
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

}  // namespace dpris::experiments
