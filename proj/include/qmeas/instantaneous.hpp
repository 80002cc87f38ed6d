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

// Sequences of N instantaneous projective measurements on a two-level
// system, driving population from |0> to |1>: direct density-matrix
// iteration, the closed-form yield
//   Y_N = (1 - cos a_1 C_12 C_23 ... C_{N-1,N} cos a_N) / 2,
//   C_mn = cos a_m cos a_n + cos(t_m - t_n) sin a_m sin a_n,
// the provably optimal sequence, and a grid-based global search that serves
// as an independent oracle for the optimum. Free evolution between
// measurements is treated in the interaction picture, where the yield does
// not depend on the measurement times; picture_transform() recovers
// Schroedinger-picture states when needed.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qmeas/density.hpp"
#include "qmeas/matrix.hpp"
#include "qmeas/solvers.hpp"

namespace qmeas {

struct MeasurementStep {
  double alpha = 0.0;
  double theta = 0.0;
};

using MeasurementSequence = std::vector<MeasurementStep>;

struct SequenceResult {
  double yield = 0.0;       // <1| rho_N |1>
  cdouble coherence{};      // <1| rho_N |0>
  Matrix<2> final_state;
};

// Applies rho_k = rho_{k-1} - [P_k, [P_k, rho_{k-1}]] in order.
inline SequenceResult run_sequence(const Matrix<2>& rho0,
                                   const MeasurementSequence& seq) {
  if (seq.empty()) throw std::invalid_argument("run_sequence: empty sequence");
  if (!is_density(rho0))
    throw std::invalid_argument("run_sequence: rho0 is not a valid density matrix");
  Matrix<2> rho = rho0;
  for (const auto& step : seq)
    rho = measure_instantaneous(rho, Projector(step.alpha, step.theta));
  SequenceResult r;
  r.final_state = rho;
  r.yield = rho(1, 1).real();
  r.coherence = rho(1, 0);
  return r;
}

// Closed-form yield from rho_0 = |0><0|. Equals run_sequence's yield.
inline double yield_closed_form(const MeasurementSequence& seq) {
  if (seq.empty())
    throw std::invalid_argument("yield_closed_form: empty sequence");
  double prod = std::cos(seq[0].alpha);
  for (std::size_t k = 1; k < seq.size(); ++k) {
    const auto& m = seq[k - 1];
    const auto& n = seq[k];
    prod *= std::cos(m.alpha) * std::cos(n.alpha) +
            std::cos(m.theta - n.theta) * std::sin(m.alpha) * std::sin(n.alpha);
  }
  return 0.5 * (1.0 - prod * std::cos(seq.back().alpha));
}

// The optimal N-step sequence: alpha_k = (N+1-k) pi/(N+1), common theta = 0,
// i.e. equal angular steps phi_0 = ... = phi_N = pi/(N+1).
inline MeasurementSequence optimal_sequence(int n) {
  if (n < 1) throw std::invalid_argument("optimal_sequence: N must be >= 1");
  MeasurementSequence seq(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k)
    seq[static_cast<std::size_t>(k - 1)] = {(n + 1 - k) * kPi / (n + 1), 0.0};
  return seq;
}

// Y_N^(O) = [1 + cos^{N+1}(pi/(N+1))] / 2.
inline double optimal_yield_instantaneous(int n) {
  if (n < 1)
    throw std::invalid_argument("optimal_yield_instantaneous: N must be >= 1");
  return 0.5 * (1.0 + std::pow(std::cos(kPi / (n + 1)), n + 1));
}

// Large-N form 1 - pi^2 / (4N).
inline double asymptotic_yield_instantaneous(int n) {
  return 1.0 - kPi * kPi / (4.0 * n);
}

struct BruteForceResult {
  MeasurementSequence sequence;
  double yield = 0.0;
};

namespace detail {

// Exact global search over the (alpha, theta) product grid. The yield couples
// only adjacent measurements through C_{k,k+1}, so the grid optimum is found
// by dynamic programming over per-step states instead of enumerating the
// full grid; max and min partial products are both tracked because the chain
// factors can be negative. theta_1 is pinned to 0, which loses nothing since
// the yield depends on theta only through differences.
inline BruteForceResult brute_force_grid(int n, int grid_alpha,
                                         int grid_theta) {
  const std::size_t ga = static_cast<std::size_t>(grid_alpha);
  const std::size_t gt = static_cast<std::size_t>(grid_theta);
  const std::size_t states = ga * gt;

  std::vector<double> ca(ga), sa(ga);
  for (std::size_t i = 0; i < ga; ++i) {
    const double a = -kPi + 2.0 * kPi * static_cast<double>(i) / ga;
    ca[i] = std::cos(a);
    sa[i] = std::sin(a);
  }
  std::vector<double> theta(gt);
  for (std::size_t j = 0; j < gt; ++j) theta[j] = kPi * static_cast<double>(j) / gt;
  // cos(theta_j - theta_j') indexed by j - j' + gt.
  std::vector<double> cdt(2 * gt + 1);
  for (std::size_t d = 0; d < 2 * gt + 1; ++d)
    cdt[d] = std::cos((static_cast<double>(d) - static_cast<double>(gt)) * kPi / gt);

  // Partial product V_k = cos a_1 * C_12 ... C_{k-1,k} per arrival state.
  std::vector<double> vmax(states), vmin(states);
  std::vector<double> nmax(states), nmin(states);
  // Backpointers: predecessor state and whether it came off the max chain.
  const std::size_t nn = static_cast<std::size_t>(n);
  std::vector<std::uint32_t> pmax(states * nn), pmin(states * nn);
  std::vector<std::uint8_t> bmax(states * nn), bmin(states * nn);

  for (std::size_t s = 0; s < states; ++s) {
    const double v = (s % gt == 0) ? ca[s / gt] : -2.0;  // theta_1 = 0 only
    vmax[s] = (s % gt == 0) ? v : -2.0;
    vmin[s] = (s % gt == 0) ? v : 2.0;  // sentinel: unreachable
  }

  for (std::size_t k = 1; k < nn; ++k) {
    for (std::size_t s2 = 0; s2 < states; ++s2) {
      const std::size_t i2 = s2 / gt, j2 = s2 % gt;
      double best_hi = -2.0, best_lo = 2.0;
      std::uint32_t arg_hi = 0, arg_lo = 0;
      std::uint8_t br_hi = 0, br_lo = 0;
      for (std::size_t i1 = 0; i1 < ga; ++i1) {
        const double cc = ca[i1] * ca[i2];
        const double ss = sa[i1] * sa[i2];
        for (std::size_t j1 = 0; j1 < gt; ++j1) {
          const std::size_t s1 = i1 * gt + j1;
          if (vmax[s1] < -1.5) continue;  // unreachable at k = 1
          const double c = cc + cdt[j1 - j2 + gt] * ss;
          const double a = c * vmax[s1];
          const double b = c * vmin[s1];
          const double hi = a > b ? a : b;
          const double lo = a < b ? a : b;
          if (hi > best_hi) { best_hi = hi; arg_hi = static_cast<std::uint32_t>(s1); br_hi = a > b; }
          if (lo < best_lo) { best_lo = lo; arg_lo = static_cast<std::uint32_t>(s1); br_lo = a < b; }
        }
      }
      nmax[s2] = best_hi;
      nmin[s2] = best_lo;
      pmax[k * states + s2] = arg_hi;
      pmin[k * states + s2] = arg_lo;
      bmax[k * states + s2] = br_hi;
      bmin[k * states + s2] = br_lo;
    }
    vmax.swap(nmax);
    vmin.swap(nmin);
  }

  // Yield = (1 - V_N cos a_N) / 2: minimize V_N cos a_N over final states.
  double best = 2.0;
  std::size_t arg = 0;
  bool from_min = false;
  for (std::size_t s = 0; s < states; ++s) {
    if (vmax[s] < -1.5 && nn == 1) continue;
    const double c = ca[s / gt];
    const double a = c * vmax[s];
    const double b = c * vmin[s];
    if (a < best) { best = a; arg = s; from_min = false; }
    if (b < best) { best = b; arg = s; from_min = true; }
  }

  BruteForceResult r;
  r.yield = 0.5 * (1.0 - best);
  r.sequence.resize(nn);
  std::size_t s = arg;
  bool on_min = from_min;
  for (std::size_t k = nn; k-- > 0;) {
    r.sequence[k] = {-kPi + 2.0 * kPi * static_cast<double>(s / gt) / ga,
                     theta[s % gt]};
    if (k == 0) break;
    const std::size_t idx = k * states + s;
    if (on_min) {
      on_min = !bmin[idx];  // came off the max chain if branch flag is 0
      s = pmin[idx];
    } else {
      on_min = !bmax[idx];
      s = pmax[idx];
    }
  }
  return r;
}

}  // namespace detail

// Assumption-free search for the optimal N-step sequence: exhaustive
// product-grid optimum (via the chain DP above), then coordinate-wise
// golden-section refinement of all 2N angles until the yield improves by
// less than 1e-10 per pass.
inline BruteForceResult brute_force_optimal(int n, int grid = 64) {
  if (n < 1) throw std::invalid_argument("brute_force_optimal: N must be >= 1");
  if (n > 6)
    throw std::invalid_argument("brute_force_optimal: N > 6 exceeds the grid budget");
  if (grid < 64)
    throw std::invalid_argument("brute_force_optimal: need at least 64 grid points per angle");

  BruteForceResult r = detail::brute_force_grid(n, grid, grid);

  std::vector<double> x(2 * static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < r.sequence.size(); ++k) {
    x[k] = r.sequence[k].alpha;
    x[k + r.sequence.size()] = r.sequence[k].theta;
  }
  auto objective = [&](const std::vector<double>& v) {
    MeasurementSequence seq(r.sequence.size());
    for (std::size_t k = 0; k < seq.size(); ++k)
      seq[k] = {v[k], v[k + seq.size()]};
    return yield_closed_form(seq);
  };

  double window = 2.0 * kPi / grid;
  double value = objective(x);
  for (int pass = 0; pass < 400; ++pass) {
    const double next = golden_refine_pass(objective, x, window);
    const double gain = next - value;
    value = next;
    if (gain < 1e-10 && pass >= 3) break;
    window = std::max(0.7 * window, 1e-8);
  }

  for (std::size_t k = 0; k < r.sequence.size(); ++k) {
    const Projector p(x[k], x[k + r.sequence.size()]);
    r.sequence[k] = {p.alpha(), p.theta()};
  }
  r.yield = value;
  return r;
}

}  // namespace qmeas
