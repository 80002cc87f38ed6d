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

// Measurement-assisted coherent control of the symmetric three-level ladder
// with H(Omega) = Omega|0><1| + Omega|1><2| + h.c. in the rotating frame.
// Coherent evolution from |0> conserves |C0 C2 - C1^2/2|, which caps the
// population of |1> at 1/2; a single non-selective measurement of |0><0| (or
// |2><2|) between two constant pulses breaks the symmetry and raises the
// attainable population to
//   P_max = 4e-3 (sqrt(393 - 48 sqrt 6) + 138 + 7 sqrt 6) ~ 0.687.
// Provides the exact propagator, the three-step protocol, its closed-form
// population, the analytic optimum, and grid oracles for all of them.
//
// Phase convention: pulses propagate with U = exp(-i tau H(Omega)). Under
// this convention the interference term of the closed-form population enters
// as +2 [sin x1 - 2 sin(x1/2)] sin x2 cos(psi2 - psi1); the same family of
// populations written with the opposite bracket sign corresponds to shifting
// psi2 - psi1 by pi and has the identical maximum.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qmeas/density.hpp"
#include "qmeas/matrix.hpp"
#include "qmeas/solvers.hpp"

namespace qmeas {

inline constexpr double kSqrt2 = 1.4142135623730951;

// The ladder system of the three-level protocol; the dynamics below works in
// the rotating frame, H0 enters only through picture bookkeeping and the
// Euler decomposition.
struct ThreeLevelSystem {
  static FreeHamiltonian<3> free_hamiltonian() { return {{1.0, 2.0, 3.0}}; }

  static Matrix<3> dipole() {
    Matrix<3> mu;
    mu(0, 1) = mu(1, 0) = mu(1, 2) = mu(2, 1) = 1.0;
    return mu;
  }
};

// Constant pulse Omega = magnitude e^{i phase} applied for `duration`.
// Only the dimensionless area x = 2 sqrt(2) |Omega| duration and the phase
// enter any population.
struct RabiPulse {
  double magnitude = 0.0;  // |Omega| >= 0
  double phase = 0.0;      // psi
  double duration = 0.0;

  double area() const { return 2.0 * kSqrt2 * magnitude * duration; }
};

// Pulse of a given (possibly negative) area x = 2 sqrt(2)|Omega| t; negative
// areas fold into a pi phase shift.
inline RabiPulse pulse_from_area(double x, double psi) {
  if (x < 0.0) return {-x / (2.0 * kSqrt2), psi + kPi, 1.0};
  return {x / (2.0 * kSqrt2), psi, 1.0};
}

struct ThreeLevelPlan {
  RabiPulse pulse1;
  int measured_level = 0;  // 0 or 2
  RabiPulse pulse2;
};

struct StateCoefficients {
  cdouble c0, c1, c2;
};

// U(tau) = exp(-i tau H(Omega)), in closed form: with
// |w> = (Omega|0> + Omega*|2>)/(sqrt 2 |Omega|), H = sqrt2 |Omega| (|1><w| + |w><1|),
//   U = P_wt + cos(sqrt2 |Omega| tau)(|1><1| + |w><w|)
//         - i sin(sqrt2 |Omega| tau)(|1><w| + |w><1|),
// where P_wt projects onto (Omega|0> - Omega*|2>)/(sqrt 2 |Omega|).
// A zero-magnitude pulse is the identity (the continuous limit).
inline Matrix<3> propagator(const RabiPulse& pulse) {
  if (pulse.magnitude == 0.0) return Matrix<3>::identity();
  const double angle = kSqrt2 * pulse.magnitude * pulse.duration;  // x/2
  const cdouble up = std::polar(1.0 / kSqrt2, pulse.phase);
  Vector<3> w, wt;
  w[0] = up;
  w[2] = std::conj(up);
  wt[0] = up;
  wt[2] = -std::conj(up);
  const Vector<3> one = basis_state<3>(1);
  Matrix<3> u = outer(wt, wt) +
                std::cos(angle) * (outer(one, one) + outer(w, w)) +
                cdouble{0.0, -std::sin(angle)} * (outer(one, w) + outer(w, one));
  return u;
}

// Coefficients of U(pulse)|0>.
inline StateCoefficients coefficients_from_ground(const RabiPulse& pulse) {
  const Vector<3> psi = propagator(pulse) * basis_state<3>(0);
  return {psi[0], psi[1], psi[2]};
}

// |C0 C2 - C1^2/2|: conserved by every coherent pulse, zero along coherent
// evolution from |0>, and the obstruction to coherent-only transfer > 50%.
inline double symmetry_invariant(const StateCoefficients& c) {
  return std::abs(c.c0 * c.c2 - 0.5 * c.c1 * c.c1);
}

struct PlanResult {
  Matrix<3> final_state;
  double population = 0.0;  // <1| rho_3 |1>
};

// The three-step protocol: pulse 1, non-selective measurement of the chosen
// basis projector, pulse 2.
inline PlanResult run_plan(const ThreeLevelPlan& plan) {
  if (plan.measured_level != 0 && plan.measured_level != 2)
    throw std::invalid_argument("run_plan: measured level must be 0 or 2");
  const Matrix<3> u1 = propagator(plan.pulse1);
  const Matrix<3> u2 = propagator(plan.pulse2);
  const Matrix<3> rho1 = u1 * ground_state_density<3>() * u1.adjoint();
  const Matrix<3> rho2 = measure_instantaneous(
      rho1, basis_projector<3>(static_cast<std::size_t>(plan.measured_level)));
  PlanResult r;
  r.final_state = u2 * rho2 * u2.adjoint();
  r.population = r.final_state(1, 1).real();
  return r;
}

// Closed-form population of |1> after the P0-measurement protocol, with
// x_k = 2 sqrt(2) |Omega_k| t_k:
//   P = (1/16) { 5 - cos x1 - [1 + 3 cos x1] cos x2
//                + 2 [sin x1 - 2 sin(x1/2)] sin x2 cos(psi2 - psi1) }.
inline double population_closed_form(double x1, double x2, double psi1,
                                     double psi2) {
  const double c1 = std::cos(x1);
  const double c2 = std::cos(x2);
  const double cross = (std::sin(x1) - 2.0 * std::sin(0.5 * x1)) *
                       std::sin(x2) * std::cos(psi2 - psi1);
  return (5.0 - c1 - (1.0 + 3.0 * c1) * c2 + 2.0 * cross) / 16.0;
}

// Population written in the Euler-decomposition variables, where the two
// pulse stages are U_k = exp(i a_k H0) exp(i x_k mu/(2 sqrt 2)) exp(i b_k H0)
// and only a2 + b1 survives:
//   (rho_3)_11 = (1/16)[5 - cos x2 - cos x1 (1 + 3 cos x2)
//                       + 2 cos(a2 + b1)(sin x1 - 2 sin(x1/2)) sin x2].
inline double euler_population(double x1, double x2, double a2_plus_b1) {
  const double c1 = std::cos(x1);
  const double c2 = std::cos(x2);
  return (5.0 - c2 - c1 * (1.0 + 3.0 * c2) +
          2.0 * std::cos(a2_plus_b1) *
              (std::sin(x1) - 2.0 * std::sin(0.5 * x1)) * std::sin(x2)) /
         16.0;
}

struct ThreeLevelOptimum {
  double x1_star = 0.0;
  double x2_star = 0.0;
  double delta_psi = 0.0;  // psi2 - psi1 at the maximum (mod 2 pi)
  double p_max = 0.0;
};

// The exact maximum of the protocol population:
//   x1* = 2 arctan(sqrt(18 + 2 sqrt 6)/(sqrt 6 - 1)) - 2 pi,
//   x2* = -arctan(sqrt(18 + 2 sqrt 6)/(sqrt 6 - 1)),
//   P_max = 4e-3 (sqrt(393 - 48 sqrt 6) + 138 + 7 sqrt 6).
// Under the exp(-i tau H) convention the interference term is maximal at
// psi2 - psi1 = pi (mod 2 pi) for this (x1*, x2*) branch; the mirrored
// branches (-x1*, -x2*) and (x1*, -x2*, delta_psi = 0) attain the same value.
inline ThreeLevelOptimum optimal_plan() {
  const double s6 = std::sqrt(6.0);
  const double k = std::sqrt(18.0 + 2.0 * s6) / (s6 - 1.0);
  ThreeLevelOptimum o;
  o.x1_star = 2.0 * std::atan(k) - 2.0 * kPi;
  o.x2_star = -std::atan(k);
  o.delta_psi = kPi;
  o.p_max = 4e-3 * (std::sqrt(393.0 - 48.0 * s6) + 138.0 + 7.0 * s6);
  return o;
}

// Population of |1> after two pulses with *no* measurement; capped at 1/2 by
// the dynamical symmetry.
inline double coherent_population(double x1, double x2, double delta_psi) {
  const Matrix<3> u = propagator(pulse_from_area(x2, delta_psi)) *
                      propagator(pulse_from_area(x1, 0.0));
  const Vector<3> psi = u * basis_state<3>(0);
  return std::norm(psi[1]);
}

struct GridMaximum {
  double x1 = 0.0;
  double x2 = 0.0;
  double delta_psi = 0.0;
  double value = 0.0;
};

namespace detail {

// Grid scan over (x1, x2) in [-2pi, 2pi]^2 x delta_psi in [0, 2pi), followed
// by coordinate golden-section refinement of all three arguments to 1e-12.
template <class F>
GridMaximum maximize_on_grid(F&& f, int grid, int phase_grid) {
  GridMaximum best;
  best.value = -1.0;
  for (int ip = 0; ip < phase_grid; ++ip) {
    const double dp = 2.0 * kPi * ip / phase_grid;
    for (int i = 0; i <= grid; ++i) {
      const double x1 = -2.0 * kPi + 4.0 * kPi * i / grid;
      for (int j = 0; j <= grid; ++j) {
        const double x2 = -2.0 * kPi + 4.0 * kPi * j / grid;
        const double v = f(x1, x2, dp);
        if (v > best.value) best = {x1, x2, dp, v};
      }
    }
  }
  std::vector<double> args{best.x1, best.x2, best.delta_psi};
  auto packed = [&](const std::vector<double>& a) { return f(a[0], a[1], a[2]); };
  const double window = 4.0 * kPi / grid;
  double value = best.value;
  for (int pass = 0; pass < 200; ++pass) {
    const double next = golden_refine_pass(packed, args, window);
    if (next - value < 1e-13 && pass >= 2) {
      value = next;
      break;
    }
    value = next;
  }
  return {args[0], args[1], args[2], value};
}

}  // namespace detail

// Independent oracle for optimal_plan(): exhaustive grid + refinement of the
// closed-form population.
inline GridMaximum maximize_population_grid(int grid = 256) {
  return detail::maximize_on_grid(
      [](double x1, double x2, double dp) {
        return population_closed_form(x1, x2, 0.0, dp);
      },
      grid, 2);  // P is linear in cos(delta_psi): extremes lie at 0 and pi
}

// Grid + refinement over the Euler variables (x1, x2, a2 + b1).
inline GridMaximum maximize_euler_grid(int grid = 128) {
  return detail::maximize_on_grid(
      [](double x1, double x2, double dp) { return euler_population(x1, x2, dp); },
      grid, 2);
}

// Best coherent-only (measurement-free) transfer over two pulses.
inline GridMaximum maximize_coherent_grid(int grid = 96) {
  return detail::maximize_on_grid(
      [](double x1, double x2, double dp) {
        return coherent_population(x1, x2, dp);
      },
      grid, 8);
}

// Best protocol population when |2><2| is measured instead of |0><0|;
// evaluated through run_plan directly.
inline GridMaximum maximize_p2_measurement_grid(int grid = 96) {
  return detail::maximize_on_grid(
      [](double x1, double x2, double dp) {
        return run_plan({pulse_from_area(x1, 0.0), 2, pulse_from_area(x2, dp)})
            .population;
      },
      grid, 8);
}

}  // namespace qmeas
