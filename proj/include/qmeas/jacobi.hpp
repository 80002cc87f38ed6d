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

// Cyclic Jacobi eigendecomposition of real symmetric matrices. Backward
// stable, so eigenvalues come out to machine precision even for clustered
// spectra; used for the density-matrix positivity checks and the covariance
// adaptation of the evolution strategy. Sizes here never exceed a few dozen.

#include <cmath>
#include <cstddef>
#include <vector>

namespace qmeas {

// a is row-major n x n symmetric (taken by value and destroyed). Eigenvalues
// land in eval (unordered), eigenvectors as columns of evec.
inline void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& eval,
                         std::vector<double>& evec) {
  evec.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) evec[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto at = [n](std::vector<double>& m, int r, int c) -> double& {
    return m[static_cast<std::size_t>(r) * n + c];
  };
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(at(a, i, j)));
  if (scale == 0.0) scale = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(at(a, p, q)));
    if (off <= 1e-15 * scale) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(a, p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        const double tau = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(a, k, p);
          const double akq = at(a, k, q);
          at(a, k, p) = c * akp - s * akq;
          at(a, k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(a, p, k);
          const double aqk = at(a, q, k);
          at(a, p, k) = c * apk - s * aqk;
          at(a, q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = at(evec, k, p);
          const double vkq = at(evec, k, q);
          at(evec, k, p) = c * vkp - s * vkq;
          at(evec, k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  eval.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    eval[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i) * n + i];
}

}  // namespace qmeas
