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

// Continuous measurement of a time-dependent projector P(t) on a two-level
// system, governed by the double-commutator master equation
//   d rho / dt = -gamma [P(t), [P(t), rho(t)]],
// with P(t) parameterized by angles alpha(t), theta(t). Provides:
//   * fixed-step RK4 integration of the master equation,
//   * the closed-form yield for the linear control alpha(t) = A t/T_f + B,
//     theta = 0, continued smoothly across delta^2 = gamma'^2 - A^2 = 0,
//   * the optimal (A_m, B_m) and optimal yield for a given gamma' = gamma T_f/2,
//   * the variational kernel of the yield and a finite-difference
//     stationarity scan around the optimum.
//
// Internally the state is the Bloch vector r, rho = (I + r.sigma)/2, in which
// the master equation reads dr/dt = gamma [(n.r) n - r] with
// n = (sin a cos t, sin a sin t, cos a) the measured axis. RK4 commutes with
// this affine change of variables, so the iterates match a matrix-form RK4
// exactly. Time is normalized to s = t/T_f; only gamma*T_f enters.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qmeas/density.hpp"
#include "qmeas/matrix.hpp"
#include "qmeas/solvers.hpp"

namespace qmeas {

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline BlochVector bloch_from_density(const Matrix<2>& rho) {
  return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(),
          (rho(0, 0) - rho(1, 1)).real()};
}

inline Matrix<2> density_from_bloch(const BlochVector& r) {
  Matrix<2> m;
  m(0, 0) = 0.5 * (1.0 + r.z);
  m(1, 1) = 0.5 * (1.0 - r.z);
  m(1, 0) = cdouble{0.5 * r.x, 0.5 * r.y};
  m(0, 1) = std::conj(m(1, 0));
  return m;
}

namespace detail {

struct ControlSegment {
  double s0, s1;    // normalized time, s = t/T_f
  double a0, a1;    // alpha at the segment ends
  double th0, th1;  // theta at the segment ends
};

}  // namespace detail

// Measurement control angles over [0, T_f], either the closed-form linear
// family alpha(s) = A s + B, theta = 0, or piecewise-linear interpolation of
// equally spaced knot values.
class ControlFunctions {
 public:
  static ControlFunctions linear(double a_slope, double b_offset) {
    if (!std::isfinite(a_slope) || !std::isfinite(b_offset))
      throw std::invalid_argument("ControlFunctions: non-finite control value");
    ControlFunctions c;
    c.linear_ = true;
    c.a_ = a_slope;
    c.b_ = b_offset;
    return c;
  }

  static ControlFunctions piecewise_linear(std::vector<double> alpha_knots,
                                           std::vector<double> theta_knots) {
    if (alpha_knots.size() < 2 || alpha_knots.size() != theta_knots.size())
      throw std::invalid_argument("ControlFunctions: need >= 2 knots for both angles");
    for (double v : alpha_knots)
      if (!std::isfinite(v))
        throw std::invalid_argument("ControlFunctions: non-finite control value");
    for (double v : theta_knots)
      if (!std::isfinite(v))
        throw std::invalid_argument("ControlFunctions: non-finite control value");
    ControlFunctions c;
    c.linear_ = false;
    c.alpha_ = std::move(alpha_knots);
    c.theta_ = std::move(theta_knots);
    return c;
  }

  bool is_linear() const { return linear_; }
  double slope() const { return a_; }
  double offset() const { return b_; }

  std::size_t segments() const { return linear_ ? 1 : alpha_.size() - 1; }

  detail::ControlSegment segment(std::size_t i) const {
    if (linear_) return {0.0, 1.0, b_, a_ + b_, 0.0, 0.0};
    const double k = static_cast<double>(alpha_.size() - 1);
    return {static_cast<double>(i) / k, static_cast<double>(i + 1) / k,
            alpha_[i], alpha_[i + 1], theta_[i], theta_[i + 1]};
  }

  double alpha_at(double s) const { return eval(s, true); }
  double theta_at(double s) const { return eval(s, false); }

 private:
  double eval(double s, bool want_alpha) const {
    if (linear_) return want_alpha ? a_ * s + b_ : 0.0;
    const auto& v = want_alpha ? alpha_ : theta_;
    const double k = static_cast<double>(v.size() - 1);
    const double pos = std::clamp(s, 0.0, 1.0) * k;
    const std::size_t i = std::min(static_cast<std::size_t>(pos), v.size() - 2);
    const double f = pos - static_cast<double>(i);
    return v[i] + f * (v[i + 1] - v[i]);
  }

  bool linear_ = true;
  double a_ = 0.0, b_ = 0.0;
  std::vector<double> alpha_, theta_;
};

namespace detail {

// RK4 over one linear control segment. The measured axis at the half-step
// grid is maintained by complex rotation recurrences (one rotor each for
// alpha and theta), refreshed from exact trig every few thousand substeps to
// kill rounding drift. on_step(s, r) fires after every substep.
template <class OnStep>
void integrate_segment(BlochVector& r, const ControlSegment& seg, double rate,
                       int substeps, OnStep&& on_step) {
  const double len = seg.s1 - seg.s0;
  const double h = len / substeps;
  const double da = 0.5 * h * (seg.a1 - seg.a0) / len;
  const double dth = 0.5 * h * (seg.th1 - seg.th0) / len;
  const double cda = std::cos(da), sda = std::sin(da);
  const double cdt = std::cos(dth), sdt = std::sin(dth);

  double caa = std::cos(seg.a0), saa = std::sin(seg.a0);
  double cth = std::cos(seg.th0), sth = std::sin(seg.th0);
  double n0x = saa * cth, n0y = saa * sth, n0z = caa;

  auto rot = [](double& c, double& s, double cr, double sr) {
    const double cn = c * cr - s * sr;
    s = s * cr + c * sr;
    c = cn;
  };

  for (int i = 0; i < substeps; ++i) {
    if (i > 0 && (i & 0xfff) == 0) {
      const double f = static_cast<double>(i) / substeps;
      const double a = seg.a0 + f * (seg.a1 - seg.a0);
      const double th = seg.th0 + f * (seg.th1 - seg.th0);
      caa = std::cos(a);
      saa = std::sin(a);
      cth = std::cos(th);
      sth = std::sin(th);
      n0x = saa * cth;
      n0y = saa * sth;
      n0z = caa;
    }
    rot(caa, saa, cda, sda);
    rot(cth, sth, cdt, sdt);
    const double n1x = saa * cth, n1y = saa * sth, n1z = caa;
    rot(caa, saa, cda, sda);
    rot(cth, sth, cdt, sdt);
    const double n2x = saa * cth, n2y = saa * sth, n2z = caa;

    const double p1 = n0x * r.x + n0y * r.y + n0z * r.z;
    const double k1x = rate * (p1 * n0x - r.x);
    const double k1y = rate * (p1 * n0y - r.y);
    const double k1z = rate * (p1 * n0z - r.z);

    double xx = r.x + 0.5 * h * k1x, yy = r.y + 0.5 * h * k1y, zz = r.z + 0.5 * h * k1z;
    const double p2 = n1x * xx + n1y * yy + n1z * zz;
    const double k2x = rate * (p2 * n1x - xx);
    const double k2y = rate * (p2 * n1y - yy);
    const double k2z = rate * (p2 * n1z - zz);

    xx = r.x + 0.5 * h * k2x;
    yy = r.y + 0.5 * h * k2y;
    zz = r.z + 0.5 * h * k2z;
    const double p3 = n1x * xx + n1y * yy + n1z * zz;
    const double k3x = rate * (p3 * n1x - xx);
    const double k3y = rate * (p3 * n1y - yy);
    const double k3z = rate * (p3 * n1z - zz);

    xx = r.x + h * k3x;
    yy = r.y + h * k3y;
    zz = r.z + h * k3z;
    const double p4 = n2x * xx + n2y * yy + n2z * zz;
    const double k4x = rate * (p4 * n2x - xx);
    const double k4y = rate * (p4 * n2y - yy);
    const double k4z = rate * (p4 * n2z - zz);

    r.x += h / 6.0 * (k1x + 2.0 * (k2x + k3x) + k4x);
    r.y += h / 6.0 * (k1y + 2.0 * (k2y + k3y) + k4y);
    r.z += h / 6.0 * (k1z + 2.0 * (k2z + k3z) + k4z);

    n0x = n2x;
    n0y = n2y;
    n0z = n2z;

    on_step(seg.s0 + (i + 1) * h, r);
  }
}

template <class OnStep>
void integrate_bloch(BlochVector& r, const ControlFunctions& ctrl, double rate,
                     int steps, OnStep&& on_step) {
  for (std::size_t i = 0; i < ctrl.segments(); ++i) {
    const ControlSegment seg = ctrl.segment(i);
    const int ns = std::max(
        1, static_cast<int>(std::ceil(steps * (seg.s1 - seg.s0) - 1e-9)));
    integrate_segment(r, seg, rate, ns, on_step);
  }
}

}  // namespace detail

// Final state only; the workhorse for optimizer loops and sweeps.
inline Matrix<2> integrate_final_state(const Matrix<2>& rho0,
                                       const ControlFunctions& ctrl,
                                       double gamma, double t_final,
                                       int steps) {
  if (steps < 1)
    throw std::invalid_argument("integrate_final_state: steps must be >= 1");
  BlochVector r = bloch_from_density(rho0);
  detail::integrate_bloch(r, ctrl, gamma * t_final, steps,
                          [](double, const BlochVector&) {});
  return density_from_bloch(r);
}

inline double final_yield(const Matrix<2>& rho0, const ControlFunctions& ctrl,
                          double gamma, double t_final, int steps) {
  return integrate_final_state(rho0, ctrl, gamma, t_final, steps)(1, 1).real();
}

struct Trajectory {
  std::vector<double> times;  // absolute time, times.front() = 0, back() = T_f
  std::vector<Matrix<2>> states;
};

// Full integration record. Substeps are distributed per control segment so
// that each segment is integrated on a smooth interval; at least `steps`
// substeps are used overall.
inline Trajectory integrate_master_equation(const Matrix<2>& rho0,
                                            const ControlFunctions& ctrl,
                                            double gamma, double t_final,
                                            int steps) {
  if (steps < 100)
    throw std::invalid_argument("integrate_master_equation: steps must be >= 100");
  if (!is_density(rho0))
    throw std::invalid_argument(
        "integrate_master_equation: rho0 is not a valid density matrix");
  Trajectory traj;
  traj.times.reserve(steps + 4);
  traj.states.reserve(steps + 4);
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  BlochVector r = bloch_from_density(rho0);
  detail::integrate_bloch(r, ctrl, gamma * t_final, steps,
                          [&](double s, const BlochVector& v) {
                            traj.times.push_back(s * t_final);
                            traj.states.push_back(density_from_bloch(v));
                          });
  traj.times.back() = t_final;
  return traj;
}

// The (A, B, gamma', delta^2) parameter set of the linear control
// alpha(t) = A t/T_f + B, theta = 0, with gamma' = gamma T_f / 2 and
// delta^2 = gamma'^2 - A^2 stored exactly as computed.
struct LinearControlParams {
  double a_slope = 0.0;      // A
  double b_offset = 0.0;     // B
  double gamma_prime = 0.0;  // gamma T_f / 2
  double delta_sq = 0.0;     // gamma'^2 - A^2

  LinearControlParams() = default;
  LinearControlParams(double a, double b, double gp)
      : a_slope(a), b_offset(b), gamma_prime(gp), delta_sq(gp * gp - a * a) {
    if (gp < 0.0)
      throw std::invalid_argument("LinearControlParams: gamma' must be >= 0");
  }

  ControlFunctions control() const {
    return ControlFunctions::linear(a_slope, b_offset);
  }
};

namespace detail {

// e^{-gp} cosh(sqrt x) and e^{-gp} sinh(sqrt x)/sqrt x as even analytic
// functions of x = delta^2: hyperbolic for x > 0 (written in terms of
// e^{-(gp -+ delta)} so large gamma' cannot overflow), trigonometric for
// x < 0, and a Taylor series near zero where both branches are removably
// equal.
inline void scaled_cosh_sinhc(double x, double gp, double& s1, double& s2) {
  constexpr double kSeries = 1e-6;
  if (x > kSeries) {
    const double d = std::sqrt(x);
    const double ea = std::exp(-(gp - d));
    const double eb = std::exp(-(gp + d));
    s1 = 0.5 * (ea + eb);
    s2 = (ea - eb) / (2.0 * d);
  } else if (x < -kSeries) {
    const double d = std::sqrt(-x);
    const double e = std::exp(-gp);
    s1 = e * std::cos(d);
    s2 = e * std::sin(d) / d;
  } else {
    const double e = std::exp(-gp);
    s1 = e * (1.0 + x * (1.0 / 2.0 + x * (1.0 / 24.0 + x / 720.0)));
    s2 = e * (1.0 + x * (1.0 / 6.0 + x * (1.0 / 120.0 + x / 5040.0)));
  }
}

}  // namespace detail

// Closed-form final yield of the linear control from rho_0 = |0><0|:
//   Y = 1/2 - (e^{-gamma'}/2) { cos A cosh d
//         + [gamma' cos(2B + A) + A sin A] sinh(d)/d },  d = sqrt(gamma'^2 - A^2),
// evaluated continuously across d^2 <= 0.
inline double analytic_yield_linear(const LinearControlParams& p) {
  double s1, s2;
  detail::scaled_cosh_sinhc(p.delta_sq, p.gamma_prime, s1, s2);
  const double a = p.a_slope;
  const double coupling =
      p.gamma_prime * std::cos(2.0 * p.b_offset + a) + a * std::sin(a);
  return 0.5 - 0.5 * (std::cos(a) * s1 + coupling * s2);
}

// The optimal slope A_m solves gamma' sin A = A. For gamma' <= 1 the only
// root in [0, pi) is A = 0; for gamma' > 1 there is exactly one root in
// (0, pi), found by bisection, and A_m -> pi as gamma' -> infinity.
inline double solve_optimal_A(double gamma_prime) {
  if (gamma_prime < 0.0)
    throw std::invalid_argument("solve_optimal_A: gamma' must be >= 0");
  if (gamma_prime <= 1.0) return 0.0;
  auto f = [gamma_prime](double a) { return gamma_prime * std::sin(a) - a; };
  return bisect(f, 1e-12, kPi - 1e-12, 1e-15);
}

struct ContinuousOptimum {
  double a_m = 0.0;
  double b_m = 0.0;
  double yield = 0.0;
};

// Optimal linear control for a given gamma': 2 B_m + A_m = pi and
// gamma' sin A_m = A_m, with yield
//   Y^(O) = (1 - e^{-gamma'(1 + cos A_m)} cos A_m) / 2.
inline ContinuousOptimum optimal_yield_continuous(double gamma_prime) {
  const double a_m = solve_optimal_A(gamma_prime);
  const double ca = std::cos(a_m);
  return {a_m, 0.5 * (kPi - a_m),
          0.5 * (1.0 - std::exp(-gamma_prime * (1.0 + ca)) * ca)};
}

// Large-gamma' form of the optimal yield, 1 - pi^2/(2 gamma T_f).
inline double asymptotic_yield_continuous(double gamma_t_final) {
  return 1.0 - kPi * kPi / (2.0 * gamma_t_final);
}

// Variational response of the state to a driving variation delta alpha(tau):
// the perturbation rho_alpha(t, tau) is real, symmetric and traceless for
// theta = 0 controls, so two scalar kernels carry it,
//   rho_alpha = [[-Y_alpha, Z_alpha], [Z_alpha, Y_alpha]],
// and delta Y(t) = -gamma Int_0^t Y_alpha(t, tau) delta alpha(tau) d tau.
struct VariationalKernel {
  double y_alpha = 0.0;  // response of the population <1|rho|1>
  double z_alpha = 0.0;  // response of the (real) off-diagonal coherence
};

// Closed form of the kernels for the *optimal* linear control
// (2B + A = pi, gamma' sin A = A):
//   Y_alpha(t, tau) = -1/2 sin(A (1 - t/T_f)) * E(t, tau),
//   Z_alpha(t, tau) = +1/2 cos(A (1 - t/T_f)) * E(t, tau),
//   E(t, tau) = exp(-A [cot(A/2) tau + tan(A/2) (t - tau)] / T_f).
// The exponent equals A[(t - 2 tau) cot A - t csc A]/T_f; the csc term
// carries the factor A, which the derivation fixes against the numerically
// propagated response (see the continuous-measurement tests). At t = T_f the
// sin prefactor vanishes for every tau, which is exactly the stationarity
// delta Y = 0. For A -> 0 both kernels tend to 0 everywhere and 0 is
// returned directly.
inline VariationalKernel variational_kernel(const LinearControlParams& p,
                                            double t_final, double t,
                                            double tau) {
  if (tau > t)
    throw std::invalid_argument("variational_kernel: tau must be <= t");
  const double a = p.a_slope;
  if (std::abs(a) < 1e-8) return {};
  const double s = t / t_final;
  const double s0 = tau / t_final;
  const double half = 0.5 * a;
  double expo = 0.0;
  if (s0 != 0.0) expo -= a * (std::cos(half) / std::sin(half)) * s0;
  if (s != s0) expo -= a * std::tan(half) * (s - s0);
  const double envelope = std::exp(expo);
  return {-0.5 * std::sin(a * (1.0 - s)) * envelope,
          0.5 * std::cos(a * (1.0 - s)) * envelope};
}

inline double variational_kernel_linear(const LinearControlParams& p,
                                        double t_final, double t, double tau) {
  return variational_kernel(p, t_final, t, tau).y_alpha;
}

struct StationarityResult {
  double max_alpha_derivative = 0.0;
  double max_theta_derivative = 0.0;

  double max() const {
    return std::max(max_alpha_derivative, max_theta_derivative);
  }
};

namespace detail {

// Piecewise-linear knots sampling alpha(s) = A s + B with a hat bump of
// height eps added to one of `n_bumps` equal-width hats (for which_angle
// selecting alpha or theta). Knots sit at s_j = j/(2 n_bumps) so every hat
// apex and foot is a knot.
inline ControlFunctions bump_control(const LinearControlParams& p, int n_bumps,
                                     int bump_index, double eps,
                                     bool bump_alpha) {
  const std::size_t n_knots = 2 * static_cast<std::size_t>(n_bumps) + 1;
  std::vector<double> alpha(n_knots), theta(n_knots, 0.0);
  for (std::size_t j = 0; j < n_knots; ++j) {
    const double s = static_cast<double>(j) / (n_knots - 1);
    alpha[j] = p.a_slope * s + p.b_offset;
  }
  const std::size_t apex = 2 * static_cast<std::size_t>(bump_index) + 1;
  (bump_alpha ? alpha : theta)[apex] += eps;
  return ControlFunctions::piecewise_linear(std::move(alpha), std::move(theta));
}

}  // namespace detail

// Central finite-difference directional derivatives of the final yield under
// hat-function perturbations of alpha(t) and theta(t), evaluated about the
// given linear control. Used to verify that the analytic optimum is a
// stationary point of the yield functional.
inline StationarityResult stationarity_scan(const LinearControlParams& p,
                                            double t_final, int n_bumps,
                                            double eps = 1e-4,
                                            int steps = 100000) {
  if (n_bumps < 1)
    throw std::invalid_argument("stationarity_scan: n_bumps must be >= 1");
  const double gamma = 2.0 * p.gamma_prime / t_final;
  const Matrix<2> rho0 = ground_state_density<2>();
  StationarityResult r;
  for (int dir = 0; dir < 2; ++dir) {
    const bool bump_alpha = dir == 0;
    double worst = 0.0;
    for (int i = 0; i < n_bumps; ++i) {
      const double y_plus =
          final_yield(rho0, detail::bump_control(p, n_bumps, i, eps, bump_alpha),
                      gamma, t_final, steps);
      const double y_minus =
          final_yield(rho0, detail::bump_control(p, n_bumps, i, -eps, bump_alpha),
                      gamma, t_final, steps);
      worst = std::max(worst, std::abs((y_plus - y_minus) / (2.0 * eps)));
    }
    (bump_alpha ? r.max_alpha_derivative : r.max_theta_derivative) = worst;
  }
  return r;
}

inline double stationarity_check(const LinearControlParams& p, double t_final,
                                 int n_bumps, double eps = 1e-4,
                                 int steps = 100000) {
  return stationarity_scan(p, t_final, n_bumps, eps, steps).max();
}

}  // namespace qmeas
