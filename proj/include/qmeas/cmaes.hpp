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

// (mu/mu_w, lambda) covariance matrix adaptation evolution strategy for
// box-constrained minimization. The update equations and default parameters
// (log-rank weights, cumulation constants, step-size damping) follow the
// standard published formulation. Selection is rank-based, so the search
// path is invariant under any strictly monotone transformation of the
// objective. All randomness comes from one seeded Rng; runs are fully
// deterministic given the configuration.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmeas/jacobi.hpp"
#include "qmeas/rng.hpp"

namespace qmeas {

struct OptimizerConfig {
  int dimension = 0;
  int population_size = 0;  // 0 -> default 4 + floor(3 ln n)
  double initial_step = 0.3;
  long max_evaluations = 10000;
  std::uint64_t seed = 1;
  // Per-coordinate {lo, hi}; empty means unconstrained. Out-of-box samples
  // are redrawn up to 100 times, then clipped coordinate-wise.
  std::vector<std::array<double, 2>> bounds;
  // Starting mean; empty -> box centers (or the origin without bounds).
  std::vector<double> initial_mean;
  // Starting covariance (row-major n x n, symmetric positive definite);
  // empty -> identity. Adaptation proceeds from here as usual.
  std::vector<double> initial_covariance;
};

struct OptimizationRun {
  std::vector<double> best_params;
  double best_value = std::numeric_limits<double>::infinity();
  // (evaluation count, best objective so far) after each generation.
  std::vector<std::pair<long, double>> history;
  long evaluations = 0;
  std::string stop_reason;
};

// Minimizes objective(x) over the configured box. The objective must be
// deterministic and finite on the box; a non-finite value aborts the run.
template <class F>
OptimizationRun es_optimize(F&& objective, const OptimizerConfig& cfg) {
  const int n = cfg.dimension;
  if (n < 1) throw std::invalid_argument("es_optimize: dimension must be >= 1");
  const int lambda = cfg.population_size > 0
                         ? cfg.population_size
                         : 4 + static_cast<int>(3.0 * std::log(n));
  if (lambda < 4)
    throw std::invalid_argument("es_optimize: population size must be >= 4");
  const bool boxed = !cfg.bounds.empty();
  if (boxed && cfg.bounds.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("es_optimize: bounds size != dimension");
  if (boxed)
    for (const auto& b : cfg.bounds)
      if (!(b[0] < b[1]))
        throw std::invalid_argument("es_optimize: bound lo must be < hi");

  const int mu = lambda / 2;
  std::vector<double> w(static_cast<std::size_t>(mu));
  for (int i = 0; i < mu; ++i)
    w[static_cast<std::size_t>(i)] = std::log(mu + 0.5) - std::log(i + 1.0);
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= wsum;
  const double mueff =
      1.0 / std::inner_product(w.begin(), w.end(), w.begin(), 0.0);

  const double nd = static_cast<double>(n);
  const double cc = (4.0 + mueff / nd) / (nd + 4.0 + 2.0 * mueff / nd);
  const double cs = (mueff + 2.0) / (nd + mueff + 5.0);
  const double c1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mueff);
  const double cmu =
      std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) /
                             ((nd + 2.0) * (nd + 2.0) + mueff));
  const double damps =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (nd + 1.0)) - 1.0) + cs;
  const double chi_n =
      std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

  std::vector<double> mean = cfg.initial_mean;
  if (mean.empty()) {
    mean.assign(static_cast<std::size_t>(n), 0.0);
    if (boxed)
      for (int i = 0; i < n; ++i)
        mean[static_cast<std::size_t>(i)] =
            0.5 * (cfg.bounds[static_cast<std::size_t>(i)][0] +
                   cfg.bounds[static_cast<std::size_t>(i)][1]);
  } else if (mean.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("es_optimize: initial_mean size != dimension");
  }

  double sigma = cfg.initial_step;
  std::vector<double> cov = cfg.initial_covariance;
  if (cov.empty()) {
    cov.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) cov[static_cast<std::size_t>(i) * n + i] = 1.0;
  } else if (cov.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("es_optimize: initial_covariance size != n^2");
  }
  std::vector<double> basis, scale;  // C = basis diag(scale^2) basis^T
  jacobi_eigen(cov, n, scale, basis);
  for (double& d : scale) d = std::sqrt(std::max(d, 1e-20));
  std::vector<double> ps(static_cast<std::size_t>(n), 0.0);
  std::vector<double> pc(static_cast<std::size_t>(n), 0.0);

  Rng rng(cfg.seed);
  OptimizationRun run;
  run.best_params = mean;

  std::vector<std::vector<double>> xs(static_cast<std::size_t>(lambda));
  std::vector<std::vector<double>> ys(static_cast<std::size_t>(lambda));
  std::vector<double> fs(static_cast<std::size_t>(lambda));
  std::vector<int> order(static_cast<std::size_t>(lambda));
  std::vector<double> z(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n)),
      x(static_cast<std::size_t>(n));

  int generation = 0;
  while (true) {
    if (run.evaluations + lambda > cfg.max_evaluations) {
      run.stop_reason = "evaluation budget reached";
      break;
    }
    if (sigma < 1e-12) {
      run.stop_reason = "step size underflow";
      break;
    }

    for (int k = 0; k < lambda; ++k) {
      bool inside = false;
      for (int attempt = 0; attempt < 100 && !inside; ++attempt) {
        for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = rng.normal();
        for (int i = 0; i < n; ++i) {
          double s = 0.0;
          for (int j = 0; j < n; ++j)
            s += basis[static_cast<std::size_t>(i) * n + j] *
                 (scale[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(j)]);
          y[static_cast<std::size_t>(i)] = s;
          x[static_cast<std::size_t>(i)] = mean[static_cast<std::size_t>(i)] + sigma * s;
        }
        inside = true;
        if (boxed)
          for (int i = 0; i < n; ++i)
            if (x[static_cast<std::size_t>(i)] < cfg.bounds[static_cast<std::size_t>(i)][0] ||
                x[static_cast<std::size_t>(i)] > cfg.bounds[static_cast<std::size_t>(i)][1]) {
              inside = false;
              break;
            }
      }
      if (!inside) {
        for (int i = 0; i < n; ++i) {
          x[static_cast<std::size_t>(i)] =
              std::clamp(x[static_cast<std::size_t>(i)], cfg.bounds[static_cast<std::size_t>(i)][0],
                         cfg.bounds[static_cast<std::size_t>(i)][1]);
          y[static_cast<std::size_t>(i)] =
              (x[static_cast<std::size_t>(i)] - mean[static_cast<std::size_t>(i)]) / sigma;
        }
      }
      const double f = objective(static_cast<const std::vector<double>&>(x));
      if (!std::isfinite(f))
        throw std::runtime_error("es_optimize: objective returned a non-finite value");
      xs[static_cast<std::size_t>(k)] = x;
      ys[static_cast<std::size_t>(k)] = y;
      fs[static_cast<std::size_t>(k)] = f;
      ++run.evaluations;
    }

    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return fs[static_cast<std::size_t>(a)] < fs[static_cast<std::size_t>(b)];
    });
    if (fs[static_cast<std::size_t>(order[0])] < run.best_value) {
      run.best_value = fs[static_cast<std::size_t>(order[0])];
      run.best_params = xs[static_cast<std::size_t>(order[0])];
    }
    run.history.emplace_back(run.evaluations, run.best_value);

    // Weighted recombination of the mu best.
    std::vector<double> yw(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < mu; ++i) {
      const auto& yi = ys[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
      for (int d = 0; d < n; ++d)
        yw[static_cast<std::size_t>(d)] += w[static_cast<std::size_t>(i)] * yi[static_cast<std::size_t>(d)];
    }
    for (int d = 0; d < n; ++d)
      mean[static_cast<std::size_t>(d)] += sigma * yw[static_cast<std::size_t>(d)];

    // Step-size path uses C^{-1/2} yw = basis diag(1/scale) basis^T yw.
    std::vector<double> tmp(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += basis[static_cast<std::size_t>(i) * n + j] * yw[static_cast<std::size_t>(i)];
      tmp[static_cast<std::size_t>(j)] = s / scale[static_cast<std::size_t>(j)];
    }
    double ps_norm_sq = 0.0;
    const double cs_in = std::sqrt(cs * (2.0 - cs) * mueff);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        s += basis[static_cast<std::size_t>(i) * n + j] * tmp[static_cast<std::size_t>(j)];
      ps[static_cast<std::size_t>(i)] = (1.0 - cs) * ps[static_cast<std::size_t>(i)] + cs_in * s;
      ps_norm_sq += ps[static_cast<std::size_t>(i)] * ps[static_cast<std::size_t>(i)];
    }
    const double ps_norm = std::sqrt(ps_norm_sq);
    const double expected = chi_n * std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * (generation + 1)));
    const bool hsig = ps_norm / expected < 1.4 + 2.0 / (nd + 1.0);

    const double cc_in = std::sqrt(cc * (2.0 - cc) * mueff);
    for (int i = 0; i < n; ++i)
      pc[static_cast<std::size_t>(i)] =
          (1.0 - cc) * pc[static_cast<std::size_t>(i)] +
          (hsig ? cc_in * yw[static_cast<std::size_t>(i)] : 0.0);

    // Rank-one + rank-mu covariance update.
    const double c_base = 1.0 - c1 - cmu + (hsig ? 0.0 : c1 * cc * (2.0 - cc));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = c_base * cov[static_cast<std::size_t>(i) * n + j] +
                   c1 * pc[static_cast<std::size_t>(i)] * pc[static_cast<std::size_t>(j)];
        for (int k = 0; k < mu; ++k) {
          const auto& yk = ys[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
          v += cmu * w[static_cast<std::size_t>(k)] * yk[static_cast<std::size_t>(i)] *
               yk[static_cast<std::size_t>(j)];
        }
        cov[static_cast<std::size_t>(i) * n + j] = v;
      }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double v = 0.5 * (cov[static_cast<std::size_t>(i) * n + j] +
                                cov[static_cast<std::size_t>(j) * n + i]);
        cov[static_cast<std::size_t>(i) * n + j] = v;
        cov[static_cast<std::size_t>(j) * n + i] = v;
      }

    sigma *= std::exp((cs / damps) * (ps_norm / chi_n - 1.0));

    jacobi_eigen(cov, n, scale, basis);
    for (double& d : scale) d = std::sqrt(std::max(d, 1e-20));

    ++generation;
  }

  return run;
}

}  // namespace qmeas
