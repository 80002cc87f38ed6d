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

// Scalar bisection and golden-section search. Both assume well-behaved
// inputs (a bracketing sign change, a locally unimodal objective) and are
// used on smooth trigonometric functions throughout.

#include <cmath>
#include <stdexcept>

namespace qmeas {

// Root of f on [lo, hi]; f(lo) and f(hi) must have opposite signs.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-15,
              int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect: interval does not bracket a root");
  for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Maximizer of f on [lo, hi] by golden-section search.
template <class F>
double golden_max(F&& f, double lo, double hi, double xtol = 1e-12) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

// One coordinate-descent pass of golden-section refinement over x, each
// coordinate restricted to [x_i - window, x_i + window]. Returns the new
// objective value.
template <class F>
double golden_refine_pass(F&& f, std::vector<double>& x, double window,
                          double xtol = 1e-12) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    auto line = [&](double v) {
      x[i] = v;
      return f(x);
    };
    x[i] = golden_max(line, xi - window, xi + window, xtol);
  }
  return f(x);
}

}  // namespace qmeas
