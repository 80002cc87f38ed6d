// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qmeas command line: runs each experiment family, cross-checks the analytic
// formulas against their numerical oracles, and writes CSV/JSON artifacts.
//
// Subcommands:
//   instantaneous --n-max K --out PATH
//   continuous    --gamma-prime a,b,c --out PATH
//   es-search     --gamma-prime a,b,c --knots K --budget B --seed S --out PATH
//   three-level   --out PATH
//
// Exit codes: 0 success, 1 usage error, 2 validation failure (an
// analytic/oracle cross-check fell outside its tolerance).
//
// Option precedence: command-line flags > --config JSON file > defaults.
// QMEAS_OUT_DIR sets the default output directory.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qmeas/continuous.hpp"
#include "qmeas/csv.hpp"
#include "qmeas/free_search.hpp"
#include "qmeas/instantaneous.hpp"
#include "qmeas/io.hpp"
#include "qmeas/three_level.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qmeas;

namespace {

constexpr int kExitValidation = 2;

json load_config(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
  }
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json cfg;
  in >> cfg;
  return cfg;
}

template <class T>
T cfg_value(const json& cfg, const std::string& section, const std::string& key,
            T fallback) {
  if (cfg.contains(section) && cfg[section].contains(key))
    return cfg[section][key].get<T>();
  return fallback;
}

std::string resolve_out(const std::string& out_flag, const std::string& out_dir,
                        const std::string& default_name) {
  if (!out_flag.empty()) return out_flag;
  return (fs::path(out_dir) / default_name).string();
}

std::string default_out_dir(const json& cfg) {
  if (cfg.contains("out_dir")) return cfg["out_dir"].get<std::string>();
  if (const char* env = std::getenv("QMEAS_OUT_DIR")) return env;
  return ".";
}

int run_instantaneous(int n_max, const std::string& out) {
  CsvWriter w(out);
  w.row("N", "Y_opt", "Y_asymptotic", "Y_bruteforce", "abs_gap");
  bool ok = true;
  for (int n = 1; n <= n_max; ++n) {
    const double y = optimal_yield_instantaneous(n);
    const double asym = asymptotic_yield_instantaneous(n);
    std::optional<double> brute;
    if (n <= 6) {
      brute = brute_force_optimal(n, 64).yield;
      if (std::abs(*brute - y) > 1e-6) {
        std::cerr << "validation: brute-force yield deviates from the closed "
                     "form at N="
                  << n << " by " << std::abs(*brute - y) << "\n";
        ok = false;
      }
    }
    w.row(n, y, asym, brute, std::abs(y - asym));
  }
  return ok ? 0 : kExitValidation;
}

int run_continuous(const std::vector<double>& gamma_primes,
                   const std::string& out, int steps) {
  CsvWriter w(out);
  w.row("gamma_prime", "A_m", "B_m", "Y_opt", "Y_rk4", "|Y_opt-Y_rk4|");
  bool ok = true;
  const Matrix<2> rho0 = ground_state_density<2>();
  for (double gp : gamma_primes) {
    const auto opt = optimal_yield_continuous(gp);
    const double rk4 = final_yield(
        rho0, ControlFunctions::linear(opt.a_m, opt.b_m), 2.0 * gp, 1.0, steps);
    const double diff = std::abs(opt.yield - rk4);
    if (diff > 1e-6) {
      std::cerr << "validation: RK4 yield deviates from the analytic optimum "
                   "at gamma'="
                << gp << " by " << diff << "\n";
      ok = false;
    }
    w.row(gp, opt.a_m, opt.b_m, opt.yield, rk4, diff);
  }
  return ok ? 0 : kExitValidation;
}

int run_es_search(const std::vector<double>& gamma_primes, int knots,
                  long budget, std::uint64_t seed, const std::string& out) {
  struct Row {
    double gp, analytic, es, gap;
    long evaluations;
  };
  std::vector<std::future<Row>> jobs;
  for (std::size_t i = 0; i < gamma_primes.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      const double gp = gamma_primes[i];
      OptimizerConfig cfg;
      cfg.max_evaluations = budget;
      cfg.seed = seed + i;
      const auto res = free_control_search(gp, knots, cfg);
      const double analytic = optimal_yield_continuous(gp).yield;
      return Row{gp, analytic, res.yield, analytic - res.yield,
                 res.run.evaluations};
    }));
  }

  CsvWriter w(out);
  w.row("gamma_prime", "Y_analytic", "Y_es", "gap", "evaluations_used");
  bool ok = true;
  for (auto& job : jobs) {
    const Row r = job.get();
    if (r.gap < -1e-6) {
      std::cerr << "validation: search exceeded the analytic optimum at gamma'="
                << r.gp << " (gap " << r.gap << ")\n";
      ok = false;
    } else if (r.gap > 1e-3) {
      std::cerr << "flag: gap " << r.gap << " above 1e-3 at gamma'=" << r.gp
                << " (coarse knots or small budget underfits)\n";
    }
    w.row(r.gp, r.analytic, r.es, r.gap, r.evaluations);
  }
  return ok ? 0 : kExitValidation;
}

// Plan parameters and population over a (x1, x2) grid at the two extremal
// relative phases, for plotting sweeps.
void write_three_level_sweep(const std::string& path, int grid) {
  CsvWriter w(path);
  w.row("x1", "x2", "delta_psi", "measured_level", "population");
  for (int ip = 0; ip < 2; ++ip) {
    const double dp = ip * kPi;
    for (int i = 0; i <= grid; ++i) {
      const double x1 = -2.0 * kPi + 4.0 * kPi * i / grid;
      for (int j = 0; j <= grid; ++j) {
        const double x2 = -2.0 * kPi + 4.0 * kPi * j / grid;
        w.row(x1, x2, dp, 0, population_closed_form(x1, x2, 0.0, dp));
      }
    }
  }
}

int run_three_level(const std::string& out, const std::string& sweep_out,
                    int sweep_grid) {
  if (!sweep_out.empty()) write_three_level_sweep(sweep_out, sweep_grid);
  const auto opt = optimal_plan();
  const auto grid = maximize_population_grid(256);
  const auto coherent = maximize_coherent_grid(96);
  const auto p2 = maximize_p2_measurement_grid(96);
  const auto best_plan = run_plan({pulse_from_area(opt.x1_star, 0.0), 0,
                                   pulse_from_area(opt.x2_star, opt.delta_psi)});

  const double grid_tol = 1e-9;
  const bool grid_matches = std::abs(grid.value - opt.p_max) < grid_tol;
  const bool coherent_capped = coherent.value <= 0.5 + 1e-9;
  const bool p2_matches = std::abs(p2.value - opt.p_max) < grid_tol;
  const bool exceeds_benchmark = opt.p_max > 0.669;
  const bool all_ok =
      grid_matches && coherent_capped && p2_matches && exceeds_benchmark;

  json report{
      {"closed_form_p_max", opt.p_max},
      {"grid_p_max", grid.value},
      {"x1_star", opt.x1_star},
      {"x2_star", opt.x2_star},
      {"delta_psi", opt.delta_psi},
      {"coherent_only_max", coherent.value},
      {"p2_measurement_max", p2.value},
      {"prior_numeric_benchmark", 0.669},
      {"improvement_over_benchmark", opt.p_max - 0.669},
      {"final_state_at_optimum", density_to_json(best_plan.final_state)},
      {"tolerances",
       {{"grid_match", grid_tol},
        {"coherent_cap", 1e-9},
        {"p2_match", grid_tol}}},
      {"checks",
       {{"grid_matches_closed_form", grid_matches},
        {"coherent_only_capped_at_half", coherent_capped},
        {"p2_measurement_matches", p2_matches},
        {"exceeds_prior_benchmark", exceeds_benchmark}}},
      {"all_ok", all_ok}};

  std::ofstream f(out, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open output file: " + out);
  f << report.dump(2) << "\n";
  if (!all_ok) std::cerr << "validation: three-level cross-checks failed\n";
  return all_ok ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmeas: optimal control of small quantum systems by measurements"};
  app.require_subcommand(1);

  json cfg;
  try {
    cfg = load_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file with per-subcommand defaults");
  std::string out_dir = default_out_dir(cfg);
  app.add_option("--out-dir", out_dir,
                 "default output directory (env: QMEAS_OUT_DIR)");

  // instantaneous
  auto* inst = app.add_subcommand(
      "instantaneous",
      "optimal yield of N instantaneous measurements vs. its oracles");
  int n_max = cfg_value(cfg, "instantaneous", "n_max", 10);
  std::string inst_out = cfg_value<std::string>(cfg, "instantaneous", "out", "");
  inst->add_option("--n-max", n_max, "largest sequence length N")
      ->check(CLI::PositiveNumber);
  inst->add_option("--out", inst_out, "output CSV path");

  // continuous
  auto* cont = app.add_subcommand(
      "continuous",
      "optimal linear continuous-measurement control (A_m, B_m, yield)");
  std::vector<double> cont_gps =
      cfg_value(cfg, "continuous", "gamma_prime", std::vector<double>{});
  std::string cont_out = cfg_value<std::string>(cfg, "continuous", "out", "");
  int cont_steps = cfg_value(cfg, "continuous", "steps", 100000);
  cont->add_option("--gamma-prime", cont_gps,
                   "comma-separated gamma' values (gamma T_f / 2)")
      ->delimiter(',')
      ->required()
      ->check(CLI::NonNegativeNumber);
  cont->add_option("--out", cont_out, "output CSV path");
  cont->add_option("--steps", cont_steps, "RK4 steps for the oracle check")
      ->check(CLI::Range(100, 100000000));

  // es-search
  auto* es = app.add_subcommand(
      "es-search",
      "structure-free evolutionary search for the best control");
  std::vector<double> es_gps =
      cfg_value(cfg, "es-search", "gamma_prime", std::vector<double>{});
  int knots = cfg_value(cfg, "es-search", "knots", 16);
  long budget = cfg_value<long>(cfg, "es-search", "budget", 100000);
  std::uint64_t seed = cfg_value<std::uint64_t>(cfg, "es-search", "seed", 1);
  std::string es_out = cfg_value<std::string>(cfg, "es-search", "out", "");
  es->add_option("--gamma-prime", es_gps, "comma-separated gamma' values")
      ->delimiter(',')
      ->required()
      ->check(CLI::NonNegativeNumber);
  es->add_option("--knots", knots, "free knot values per angle")
      ->check(CLI::Range(2, 4096));
  es->add_option("--budget", budget, "objective evaluation budget")
      ->check(CLI::Range(1000L, 1000000000L));
  es->add_option("--seed", seed, "random seed (per-gamma' seeds are seed+i)");
  es->add_option("--out", es_out, "output CSV path");

  // three-level
  auto* three = app.add_subcommand(
      "three-level",
      "measurement-assisted three-level transfer: optimum and cross-checks");
  std::string three_out = cfg_value<std::string>(cfg, "three-level", "out", "");
  std::string sweep_out = cfg_value<std::string>(cfg, "three-level", "sweep_out", "");
  int sweep_grid = cfg_value(cfg, "three-level", "sweep_grid", 64);
  three->add_option("--out", three_out, "output JSON path");
  three->add_option("--sweep-out", sweep_out,
                    "also write a population sweep CSV over (x1, x2)");
  three->add_option("--sweep-grid", sweep_grid, "sweep grid points per axis")
      ->check(CLI::Range(8, 4096));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (inst->parsed())
      return run_instantaneous(n_max,
                               resolve_out(inst_out, out_dir, "instantaneous.csv"));
    if (cont->parsed())
      return run_continuous(cont_gps,
                            resolve_out(cont_out, out_dir, "continuous.csv"),
                            cont_steps);
    if (es->parsed())
      return run_es_search(es_gps, knots, budget, seed,
                           resolve_out(es_out, out_dir, "es_search.csv"));
    if (three->parsed())
      return run_three_level(resolve_out(three_out, out_dir, "three_level.json"),
                             sweep_out, sweep_grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
