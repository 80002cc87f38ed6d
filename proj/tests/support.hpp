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

// Test-only oracles and generators, kept independent of the implementation
// paths they check: random states and controls, a plain matrix-form RK4 for
// the measurement master equation, a Taylor-series matrix exponential, and a
// numeric propagator for the variational response kernel.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "qmeas/continuous.hpp"
#include "qmeas/density.hpp"
#include "qmeas/matrix.hpp"
#include "qmeas/rng.hpp"

namespace qmeas::test {

template <std::size_t N>
Matrix<N> random_density(Rng& rng) {
  Matrix<N> g;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      g(i, j) = cdouble{rng.normal(), rng.normal()};
  Matrix<N> rho = g * g.adjoint();
  const double tr = rho.trace().real();
  return rho * cdouble{1.0 / tr, 0.0};
}

inline Projector random_projector(Rng& rng) {
  return Projector(rng.uniform(-kPi, kPi), rng.uniform(0.0, kPi));
}

// Reference integrator for d rho/dt = -gamma [P(t), [P(t), rho]] working on
// the complex matrix itself, with P built by direct trig evaluation of the
// given angle functions. Deliberately naive.
inline Matrix<2> integrate_matrix_rk4(const Matrix<2>& rho0,
                                      const std::function<double(double)>& alpha,
                                      const std::function<double(double)>& theta,
                                      double gamma, double t_final, int steps) {
  auto deriv = [&](double t, const Matrix<2>& rho) {
    const Matrix<2> p = Projector(alpha(t), theta(t)).matrix();
    const Matrix<2> inner = p * rho - rho * p;
    const Matrix<2> dbl = p * inner - inner * p;
    return dbl * cdouble{-gamma, 0.0};
  };
  const double h = t_final / steps;
  Matrix<2> rho = rho0;
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const Matrix<2> k1 = deriv(t, rho);
    const Matrix<2> k2 = deriv(t + 0.5 * h, rho + k1 * cdouble{0.5 * h, 0.0});
    const Matrix<2> k3 = deriv(t + 0.5 * h, rho + k2 * cdouble{0.5 * h, 0.0});
    const Matrix<2> k4 = deriv(t + h, rho + k3 * cdouble{h, 0.0});
    rho = rho + (k1 + (k2 + k3) * cdouble{2.0, 0.0} + k4) * cdouble{h / 6.0, 0.0};
  }
  return rho;
}

// exp(M) by scaling-and-squaring with a Taylor series.
template <std::size_t N>
Matrix<N> taylor_expm(const Matrix<N>& m) {
  int squarings = 0;
  double norm = m.max_abs() * N;
  while (norm > 0.5 && squarings < 40) {
    norm *= 0.5;
    ++squarings;
  }
  const Matrix<N> a = m * cdouble{std::pow(0.5, squarings), 0.0};
  Matrix<N> term = Matrix<N>::identity();
  Matrix<N> sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * a * cdouble{1.0 / k, 0.0};
    sum = sum + term;
    if (term.max_abs() < 1e-20) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// Variational response of the yield for theta = 0 controls, computed by
// numeric propagation: rho_alpha(t, tau) solves the same master equation in t
// with initial value dL(tau)/dalpha rho(tau), and Y_alpha = <1|rho_alpha|1>.
// Everything stays in the (x, z) Bloch plane.
struct PlanarKernelOracle {
  double a = 0.0;      // alpha slope over [0, 1]
  double b = 0.0;      // alpha offset
  double rate = 0.0;   // gamma * T_f

  // Bloch (x, z) of the base trajectory at s.
  std::array<double, 2> base_state(double s, int steps = 20000) const {
    double x = 0.0, z = 1.0;
    propagate(x, z, 0.0, s, steps);
    return {x, z};
  }

  // {Y_alpha, Z_alpha}(t, tau) in normalized time: the population and
  // coherence responses read off the propagated rho_alpha(s, s0).
  std::array<double, 2> kernel_pair(double s, double s0,
                                    int steps = 20000) const {
    auto [x, z] = base_state(s0, steps);
    const double al = a * s0 + b;
    const double nx = std::sin(al), nz = std::cos(al);
    const double mx = std::cos(al), mz = -std::sin(al);
    const double u = nx * x + nz * z;
    const double v = mx * x + mz * z;
    // w(s0) = -(v n + u m)
    double wx = -(v * nx + u * mx);
    double wz = -(v * nz + u * mz);
    propagate(wx, wz, s0, s, steps);
    return {-0.5 * wz, 0.5 * wx};
  }

  double kernel(double s, double s0, int steps = 20000) const {
    return kernel_pair(s, s0, steps)[0];
  }

 private:
  void propagate(double& x, double& z, double s_from, double s_to,
                 int steps) const {
    if (s_to <= s_from) return;
    const int n = std::max(1, static_cast<int>(steps * (s_to - s_from)));
    const double h = (s_to - s_from) / n;
    auto f = [&](double s, double px, double pz, double& dx, double& dz) {
      const double al = a * s + b;
      const double nx = std::sin(al), nz = std::cos(al);
      const double p = nx * px + nz * pz;
      dx = rate * (p * nx - px);
      dz = rate * (p * nz - pz);
    };
    for (int i = 0; i < n; ++i) {
      const double s = s_from + i * h;
      double k1x, k1z, k2x, k2z, k3x, k3z, k4x, k4z;
      f(s, x, z, k1x, k1z);
      f(s + 0.5 * h, x + 0.5 * h * k1x, z + 0.5 * h * k1z, k2x, k2z);
      f(s + 0.5 * h, x + 0.5 * h * k2x, z + 0.5 * h * k2z, k3x, k3z);
      f(s + h, x + h * k3x, z + h * k3z, k4x, k4z);
      x += h / 6.0 * (k1x + 2.0 * (k2x + k3x) + k4x);
      z += h / 6.0 * (k1z + 2.0 * (k2z + k3z) + k4z);
    }
  }
};

}  // namespace qmeas::test
