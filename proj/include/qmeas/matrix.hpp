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

// Dense complex vectors and matrices of fixed dimension 2 or 3, with the
// closed-form Hermitian eigenvalue routines used for density-matrix checks.
// Everything here is a value type; dimensions are template parameters so a
// mismatch is a compile error rather than a runtime one.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qmeas/jacobi.hpp"

namespace qmeas {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

template <std::size_t N>
class Vector {
 public:
  Vector() : e_{} {}

  cdouble& operator[](std::size_t i) { return e_[i]; }
  const cdouble& operator[](std::size_t i) const { return e_[i]; }

  static constexpr std::size_t size() { return N; }

  double norm() const {
    double s = 0.0;
    for (const auto& v : e_) s += std::norm(v);
    return std::sqrt(s);
  }

  Vector operator*(cdouble s) const {
    Vector r;
    for (std::size_t i = 0; i < N; ++i) r.e_[i] = e_[i] * s;
    return r;
  }

  Vector operator+(const Vector& o) const {
    Vector r;
    for (std::size_t i = 0; i < N; ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
  }

 private:
  std::array<cdouble, N> e_;
};

// Hermitian inner product, conjugate-linear in the first argument.
template <std::size_t N>
cdouble dot(const Vector<N>& a, const Vector<N>& b) {
  cdouble s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

template <std::size_t N>
class Matrix {
 public:
  Matrix() : e_{} {}

  static constexpr std::size_t dim() { return N; }

  static Matrix zero() { return Matrix(); }

  static Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  cdouble& operator()(std::size_t r, std::size_t c) { return e_[r * N + c]; }
  const cdouble& operator()(std::size_t r, std::size_t c) const {
    return e_[r * N + c];
  }

  Matrix operator+(const Matrix& o) const {
    Matrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    Matrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
  }

  Matrix operator-() const {
    Matrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.e_[i] = -e_[i];
    return r;
  }

  Matrix operator*(const Matrix& o) const {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cdouble a = e_[i * N + k];
        if (a == cdouble{}) continue;
        for (std::size_t j = 0; j < N; ++j) r.e_[i * N + j] += a * o.e_[k * N + j];
      }
    return r;
  }

  Vector<N> operator*(const Vector<N>& v) const {
    Vector<N> r;
    for (std::size_t i = 0; i < N; ++i) {
      cdouble s = 0.0;
      for (std::size_t j = 0; j < N; ++j) s += e_[i * N + j] * v[j];
      r[i] = s;
    }
    return r;
  }

  Matrix operator*(cdouble s) const {
    Matrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.e_[i] = e_[i] * s;
    return r;
  }

  Matrix adjoint() const {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  cdouble trace() const {
    cdouble s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += e_[i * N + i];
    return s;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : e_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::array<cdouble, N * N> e_;
};

template <std::size_t N>
Matrix<N> operator*(cdouble s, const Matrix<N>& m) {
  return m * s;
}

template <std::size_t N>
Matrix<N> operator*(double s, const Matrix<N>& m) {
  return m * cdouble{s, 0.0};
}

// |u><v|
template <std::size_t N>
Matrix<N> outer(const Vector<N>& u, const Vector<N>& v) {
  Matrix<N> m;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

template <std::size_t N>
double max_abs_diff(const Matrix<N>& a, const Matrix<N>& b) {
  return (a - b).max_abs();
}

template <std::size_t N>
double hermiticity_error(const Matrix<N>& m) {
  double err = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j)
      err = std::max(err, std::abs(m(i, j) - std::conj(m(j, i))));
  return err;
}

template <std::size_t N>
double unitarity_error(const Matrix<N>& m) {
  return max_abs_diff(m * m.adjoint(), Matrix<N>::identity());
}

inline cdouble det(const Matrix<3>& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline cdouble det(const Matrix<2>& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

// Eigenvalues of a Hermitian 2x2 matrix from the characteristic polynomial,
// ascending order.
inline std::array<double, 2> hermitian_eigenvalues(const Matrix<2>& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double half_tr = 0.5 * (a + d);
  const double dt = a * d - std::norm(m(0, 1));
  double disc = half_tr * half_tr - dt;
  if (disc < 0.0) disc = 0.0;  // rounding below a degenerate pair
  const double s = std::sqrt(disc);
  return {half_tr - s, half_tr + s};
}

// Eigenvalues of a Hermitian 3x3 matrix, ascending order. The Hermitian
// problem is embedded as the real symmetric 6x6 [[Re, -Im], [Im, Re]] (every
// eigenvalue doubled) and solved by Jacobi rotations. A trigonometric
// closed-form cubic would be dependency-free too, but loses ~sqrt(eps) near
// degenerate pairs, which is far above the 1e-9 positivity floor applied to
// density matrices; Jacobi keeps eigenvalues at machine precision.
inline std::array<double, 3> hermitian_eigenvalues(const Matrix<3>& m) {
  std::vector<double> big(36, 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double re = 0.5 * (m(i, j).real() + m(j, i).real());
      const double im = 0.5 * (m(i, j).imag() - m(j, i).imag());
      big[i * 6 + j] = re;
      big[(i + 3) * 6 + (j + 3)] = re;
      big[(i + 3) * 6 + j] = im;
      big[i * 6 + (j + 3)] = -im;
    }
  std::vector<double> eval, evec;
  jacobi_eigen(std::move(big), 6, eval, evec);
  std::sort(eval.begin(), eval.end());
  return {eval[0], eval[2], eval[4]};
}

}  // namespace qmeas
