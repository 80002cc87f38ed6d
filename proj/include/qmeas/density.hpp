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

// Density-matrix validity checks, rank-1 projectors on a two-level system,
// non-selective measurement back-action and the free-evolution picture
// transform. All operations are pure functions of their inputs.

#include <cmath>
#include <span>
#include <stdexcept>

#include "qmeas/matrix.hpp"

namespace qmeas {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
// RK4 integration downstream introduces O(h^4) negativity, hence the loose
// positive-semidefiniteness floor.
inline constexpr double kPsdFloor = -1e-9;

template <std::size_t N>
struct DensityReport {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok(double herm_tol = kHermitianTol, double trace_tol = kTraceTol,
          double psd_floor = kPsdFloor) const {
    return hermiticity_error <= herm_tol && trace_error <= trace_tol &&
           min_eigenvalue >= psd_floor;
  }
};

template <std::size_t N>
DensityReport<N> check_density(const Matrix<N>& rho) {
  DensityReport<N> r;
  r.hermiticity_error = hermiticity_error(rho);
  r.trace_error = std::abs(rho.trace() - cdouble{1.0, 0.0});
  r.min_eigenvalue = hermitian_eigenvalues(rho).front();
  return r;
}

template <std::size_t N>
bool is_density(const Matrix<N>& rho) {
  return check_density(rho).ok();
}

// tr(rho^2); 1 for pure states, 1/N for the maximally mixed state.
template <std::size_t N>
double purity(const Matrix<N>& rho) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      s += (rho(i, j) * rho(j, i)).real();
  return s;
}

template <std::size_t N>
Vector<N> basis_state(std::size_t k) {
  Vector<N> v;
  v[k] = 1.0;
  return v;
}

template <std::size_t N>
Matrix<N> basis_projector(std::size_t k) {
  Matrix<N> m;
  m(k, k) = 1.0;
  return m;
}

template <std::size_t N>
Matrix<N> ground_state_density() {
  return basis_projector<N>(0);
}

// Rank-1 projector |psi><psi| on a two-level system with
//   |psi> = cos(alpha/2)|0> + e^{i theta} sin(alpha/2)|1>.
// Construction folds the angles into the canonical ranges
// alpha in [-pi, pi), theta in [0, pi) using the global-phase freedom of
// |psi>: P(alpha, theta) = P(-alpha, theta - pi).
class Projector {
 public:
  Projector(double alpha, double theta) {
    alpha_ = wrap_alpha(alpha);
    theta_ = std::fmod(theta, 2.0 * kPi);
    if (theta_ < 0.0) theta_ += 2.0 * kPi;
    if (theta_ >= kPi) {
      theta_ -= kPi;
      alpha_ = wrap_alpha(-alpha_);
    }
    // theta is undefined when the off-diagonal vanishes identically.
    if (alpha_ == 0.0 || alpha_ == -kPi) theta_ = 0.0;
  }

  double alpha() const { return alpha_; }
  double theta() const { return theta_; }

  Vector<2> ket() const {
    Vector<2> v;
    v[0] = std::cos(alpha_ / 2.0);
    v[1] = std::polar(std::sin(alpha_ / 2.0), theta_);
    return v;
  }

  Matrix<2> matrix() const {
    const Vector<2> psi = ket();
    return outer(psi, psi);
  }

 private:
  static double wrap_alpha(double a) {
    a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
    if (a == kPi) a = -kPi;
    return a;
  }

  double alpha_;
  double theta_;
};

inline Projector make_projector(double alpha, double theta) {
  return Projector(alpha, theta);
}

// Non-selective observation of a single projector P:
//   rho' = P rho P + (1-P) rho (1-P) = rho - [P, [P, rho]].
template <std::size_t N>
Matrix<N> measure_instantaneous(const Matrix<N>& rho, const Matrix<N>& p) {
  const Matrix<N> q = Matrix<N>::identity() - p;
  return p * rho * p + q * rho * q;
}

inline Matrix<2> measure_instantaneous(const Matrix<2>& rho,
                                       const Projector& p) {
  return measure_instantaneous(rho, p.matrix());
}

// Non-selective measurement of an observable with spectral projectors
// {P_k}: rho' = sum_k P_k rho P_k. The set must be mutually orthogonal and
// complete.
template <std::size_t N>
Matrix<N> measure_observable(const Matrix<N>& rho,
                             std::span<const Matrix<N>> projectors) {
  Matrix<N> sum;
  for (const auto& p : projectors) sum = sum + p;
  if (max_abs_diff(sum, Matrix<N>::identity()) > 1e-12)
    throw std::invalid_argument("measure_observable: projectors do not sum to identity");
  for (std::size_t i = 0; i < projectors.size(); ++i)
    for (std::size_t j = i + 1; j < projectors.size(); ++j)
      if ((projectors[i] * projectors[j]).max_abs() > 1e-12)
        throw std::invalid_argument("measure_observable: projectors are not orthogonal");

  Matrix<N> out;
  for (const auto& p : projectors) out = out + p * rho * p;
  return out;
}

// Diagonal free Hamiltonian (hbar = 1); used only for the picture transform.
template <std::size_t N>
struct FreeHamiltonian {
  std::array<double, N> energy{};

  Matrix<N> matrix() const {
    Matrix<N> m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = energy[i];
    return m;
  }
};

// Interaction-picture transform e^{i H0 t} rho e^{-i H0 t}. H0 is diagonal,
// so entry (i, j) just picks up the phase e^{i (E_i - E_j) t}.
template <std::size_t N>
Matrix<N> picture_transform(const Matrix<N>& rho_s,
                            const FreeHamiltonian<N>& h0, double t) {
  Matrix<N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      out(i, j) = rho_s(i, j) * std::polar(1.0, (h0.energy[i] - h0.energy[j]) * t);
  return out;
}

}  // namespace qmeas
