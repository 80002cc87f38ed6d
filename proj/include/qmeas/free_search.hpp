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

#pragma once

// Structure-free search for the best continuous-measurement control: the
// evolution strategy optimizes piecewise-linear alpha(t) and theta(t) with
// `knots` free values each, with no linearity assumption, against the final
// yield from master-equation integration. Used to check that the analytic
// linear optimum is not beaten by any nonlinear control.

#include <stdexcept>
#include <utility>
#include <vector>

#include "qmeas/cmaes.hpp"
#include "qmeas/continuous.hpp"

namespace qmeas {

inline constexpr double kFreeSearchAlphaBound = 2.0 * kPi;  // alpha in [-2pi, 2pi]
inline constexpr int kFreeSearchSteps = 10000;  // RK4 steps per evaluation

struct FreeSearchResult {
  std::vector<double> alpha_knots;
  std::vector<double> theta_knots;
  double yield = 0.0;
  OptimizationRun run;
};

// Default initial covariance for the knot search: a random-walk kernel,
// cov(v_i, v_j) = 1 + min(i, j) per angle block, normalized to unit mean
// diagonal. Knot values of the same angle start strongly correlated, which
// makes collective moves (constant shifts, suffix shifts) principal sampling
// directions. That matters because the measured projector is invariant under
// alpha -> alpha + pi and (alpha, theta) -> (-alpha, theta + pi): with an
// identity covariance, knots land on mixed representative branches and the
// search stalls in re-labeling traps whose escape needs exactly such a
// collective move. Full rank, so no control shape is excluded; adaptation
// proceeds from here as usual.
inline std::vector<double> free_search_initial_covariance(int knots) {
  const int n = 2 * knots;
  std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
  double mean_diag = 0.0;
  for (int i = 0; i < knots; ++i) mean_diag += 1.0 + i;
  mean_diag /= knots;
  for (int block = 0; block < 2; ++block)
    for (int i = 0; i < knots; ++i)
      for (int j = 0; j < knots; ++j)
        c[static_cast<std::size_t>(block * knots + i) * n + (block * knots + j)] =
            (1.0 + std::min(i, j)) / mean_diag;
  return c;
}

// Maximizes the final yield over equally spaced knot values, alpha knots in
// [-2pi, 2pi] and theta knots in [0, pi]. cfg.dimension and, when not given,
// cfg.bounds and cfg.initial_mean are filled in from `knots`.
inline FreeSearchResult free_control_search(double gamma_prime, int knots,
                                            OptimizerConfig cfg,
                                            int integration_steps = kFreeSearchSteps) {
  if (knots < 2)
    throw std::invalid_argument("free_control_search: knots must be >= 2");
  if (gamma_prime < 0.0)
    throw std::invalid_argument("free_control_search: gamma' must be >= 0");

  const std::size_t nk = static_cast<std::size_t>(knots);
  cfg.dimension = 2 * knots;
  if (cfg.bounds.empty()) {
    cfg.bounds.resize(2 * nk);
    for (std::size_t i = 0; i < nk; ++i)
      cfg.bounds[i] = {-kFreeSearchAlphaBound, kFreeSearchAlphaBound};
    for (std::size_t i = nk; i < 2 * nk; ++i) cfg.bounds[i] = {0.0, kPi};
  }
  if (cfg.initial_mean.empty()) {
    cfg.initial_mean.assign(2 * nk, 0.0);
    for (std::size_t i = nk; i < 2 * nk; ++i) cfg.initial_mean[i] = 0.5 * kPi;
  }
  if (cfg.initial_covariance.empty())
    cfg.initial_covariance = free_search_initial_covariance(knots);

  // T_f = 1 internally; gamma = 2 gamma' / T_f.
  const double gamma = 2.0 * gamma_prime;
  const Matrix<2> rho0 = ground_state_density<2>();
  auto objective = [&](const std::vector<double>& params) {
    std::vector<double> alpha(params.begin(), params.begin() + knots);
    std::vector<double> theta(params.begin() + knots, params.end());
    const auto ctrl =
        ControlFunctions::piecewise_linear(std::move(alpha), std::move(theta));
    return -final_yield(rho0, ctrl, gamma, 1.0, integration_steps);
  };

  FreeSearchResult result;
  result.run = es_optimize(objective, cfg);
  result.yield = -result.run.best_value;
  result.alpha_knots.assign(result.run.best_params.begin(),
                            result.run.best_params.begin() + knots);
  result.theta_knots.assign(result.run.best_params.begin() + knots,
                            result.run.best_params.end());
  return result;
}

}  // namespace qmeas
