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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmeas/instantaneous.hpp"
#include "support.hpp"

using namespace qmeas;

namespace {

MeasurementSequence random_sequence(Rng& rng, int max_n) {
  const int n = 1 + static_cast<int>(rng.uniform01() * max_n);
  MeasurementSequence seq(static_cast<std::size_t>(n));
  for (auto& s : seq) s = {rng.uniform(-kPi, kPi), rng.uniform(0.0, kPi)};
  return seq;
}

}  // namespace

TEST_CASE("run_sequence examples") {
  const Matrix<2> rho0 = ground_state_density<2>();

  // Measuring the initial state does nothing.
  CHECK(run_sequence(rho0, {{0.0, 0.0}}).yield == doctest::Approx(0.0));

  // A single equal-superposition measurement fully mixes the state:
  // Y_1 = (1 - cos^2 alpha)/2 = 1/2 at alpha = pi/2, consistent with the
  // |0><0| -> diag(1/2, 1/2) back-action and with the N = 1 optimum below.
  CHECK(run_sequence(rho0, {{kPi / 2, 0.0}}).yield ==
        doctest::Approx(0.5).epsilon(1e-12));
  // A pi/3 measurement transfers (1 - cos^2(pi/3))/2 = 3/8.
  CHECK(run_sequence(rho0, {{kPi / 3, 0.0}}).yield ==
        doctest::Approx(0.375).epsilon(1e-12));

  // Optimal one-step sequence reaches 1/2.
  const auto opt1 = optimal_sequence(1);
  CHECK(run_sequence(rho0, opt1).yield == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sequence result internal consistency") {
  Rng rng(101);
  const Matrix<2> rho0 = ground_state_density<2>();
  for (int i = 0; i < 200; ++i) {
    const auto seq = random_sequence(rng, 8);
    const auto res = run_sequence(rho0, seq);
    CHECK(res.yield == doctest::Approx(res.final_state(1, 1).real()).epsilon(1e-13));
    CHECK(std::norm(res.coherence) <= res.yield * (1.0 - res.yield) + 1e-12);
    CHECK(is_density(res.final_state));
  }
}

TEST_CASE("yield_closed_form examples") {
  CHECK(yield_closed_form({{kPi / 2, 0.0}}) == doctest::Approx(0.5));

  // N = 2 optimum: (1 + cos^3(pi/3)) / 2 = 0.5625.
  CHECK(yield_closed_form({{2.0 * kPi / 3.0, 0.0}, {kPi / 3.0, 0.0}}) ==
        doctest::Approx(0.5625).epsilon(1e-14));

  Rng rng(103);
  const Matrix<2> rho0 = ground_state_density<2>();
  for (int i = 0; i < 50; ++i) {
    MeasurementSequence seq(5);
    for (auto& s : seq) s = {rng.uniform(-kPi, kPi), rng.uniform(0.0, kPi)};
    CHECK(yield_closed_form(seq) ==
          doctest::Approx(run_sequence(rho0, seq).yield).epsilon(1e-12));
  }
}

TEST_CASE("closed form equals iteration for random sequences") {
  Rng rng(107);
  const Matrix<2> rho0 = ground_state_density<2>();
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto seq = random_sequence(rng, 10);
    worst = std::max(worst, std::abs(yield_closed_form(seq) -
                                     run_sequence(rho0, seq).yield));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("optimal_sequence angles") {
  const auto s1 = optimal_sequence(1);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].alpha == doctest::Approx(kPi / 2));

  const auto s2 = optimal_sequence(2);
  REQUIRE(s2.size() == 2);
  CHECK(s2[0].alpha == doctest::Approx(2.0 * kPi / 3.0));
  CHECK(s2[1].alpha == doctest::Approx(kPi / 3.0));

  const auto s3 = optimal_sequence(3);
  REQUIRE(s3.size() == 3);
  CHECK(s3[0].alpha == doctest::Approx(3.0 * kPi / 4.0));
  CHECK(s3[1].alpha == doctest::Approx(kPi / 2.0));
  CHECK(s3[2].alpha == doctest::Approx(kPi / 4.0));

  // Running the optimal sequence attains the closed-form optimum.
  const Matrix<2> rho0 = ground_state_density<2>();
  for (int n = 1; n <= 12; ++n)
    CHECK(run_sequence(rho0, optimal_sequence(n)).yield ==
          doctest::Approx(optimal_yield_instantaneous(n)).epsilon(1e-13));

  CHECK_THROWS_AS(optimal_sequence(0), std::invalid_argument);
}

TEST_CASE("optimal yield values and monotonicity") {
  CHECK(optimal_yield_instantaneous(1) == 0.5);
  CHECK(optimal_yield_instantaneous(2) == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(optimal_yield_instantaneous(3) == doctest::Approx(0.625).epsilon(1e-15));

  for (int n = 1; n < 1000; ++n) {
    CHECK(optimal_yield_instantaneous(n + 1) > optimal_yield_instantaneous(n));
    CHECK(optimal_yield_instantaneous(n) > 0.0);
    CHECK(optimal_yield_instantaneous(n) < 1.0);
  }

  // Large-N behavior approaches 1 - pi^2/(4N).
  CHECK(std::abs(optimal_yield_instantaneous(1000) -
                 asymptotic_yield_instantaneous(1000)) < 5e-5);
  CHECK_THROWS_AS(optimal_yield_instantaneous(0), std::invalid_argument);
}

TEST_CASE("theta flatness at the optimum") {
  // Perturbing any single theta away from the common value never raises the
  // yield.
  for (int n = 1; n <= 5; ++n) {
    const auto base = optimal_sequence(n);
    const double y0 = yield_closed_form(base);
    for (std::size_t k = 0; k < base.size(); ++k) {
      for (double d : {-0.01, 0.01}) {
        auto seq = base;
        seq[k].theta += d;
        CHECK(yield_closed_form(seq) <= y0 + 1e-12);
      }
    }
  }
}

TEST_CASE("equal-theta sequences obey the majorization bound") {
  Rng rng(109);
  for (int i = 0; i < 3000; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform01() * 10);
    const double theta = rng.uniform(0.0, kPi);
    MeasurementSequence seq(static_cast<std::size_t>(n));
    for (auto& s : seq) s = {rng.uniform(-kPi, kPi), theta};
    CHECK(yield_closed_form(seq) <= optimal_yield_instantaneous(n) + 1e-12);
  }
}

TEST_CASE("schroedinger-picture iteration reproduces the interaction-picture yield") {
  // With free evolution restored, the sequence runs as: evolve under H0 to
  // T_k, measure the picture-transformed projector e^{-i H0 T_k} P_k
  // e^{i H0 T_k}, repeat. |1> is an H0 eigenstate, so the final yield must
  // match the interaction-picture result for any measurement times.
  Rng rng(113);
  const FreeHamiltonian<2> h0{{0.0, 1.3}};
  for (int trial = 0; trial < 50; ++trial) {
    const auto seq = random_sequence(rng, 6);
    double t = 0.0;
    Matrix<2> rho_s = ground_state_density<2>();
    for (const auto& step : seq) {
      const double dt = rng.uniform(0.1, 2.0);
      t += dt;
      rho_s = picture_transform(rho_s, h0, -dt);  // e^{-i H0 dt} rho e^{i H0 dt}
      const Matrix<2> p_s =
          picture_transform(Projector(step.alpha, step.theta).matrix(), h0, -t);
      rho_s = measure_instantaneous(rho_s, p_s);
    }
    CHECK(rho_s(1, 1).real() ==
          doctest::Approx(yield_closed_form(seq)).epsilon(1e-12));
  }
}

TEST_CASE("chain DP equals exhaustive grid enumeration") {
  // The DP exploits the adjacent-pair structure of the yield; an explicit
  // enumeration over the same (alpha, theta) grid must find the same optimum.
  const int ga = 20, gt = 8;
  std::vector<double> alpha(ga), theta(gt);
  for (int i = 0; i < ga; ++i) alpha[i] = -kPi + 2.0 * kPi * i / ga;
  for (int j = 0; j < gt; ++j) theta[j] = kPi * j / gt;

  for (int n : {1, 2, 3}) {
    double best = -1.0;
    const int states = ga * gt;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      MeasurementSequence seq(static_cast<std::size_t>(n));
      bool valid = true;
      for (int k = 0; k < n; ++k) {
        const int s = idx[static_cast<std::size_t>(k)];
        if (k == 0 && s % gt != 0) valid = false;  // theta_1 pinned to 0
        seq[static_cast<std::size_t>(k)] = {alpha[s / gt], theta[s % gt]};
      }
      if (valid) best = std::max(best, yield_closed_form(seq));
      int k = 0;
      for (; k < n; ++k) {
        if (++idx[static_cast<std::size_t>(k)] < states) break;
        idx[static_cast<std::size_t>(k)] = 0;
      }
      if (k == n) break;
    }
    const auto dp = detail::brute_force_grid(n, ga, gt);
    CHECK(dp.yield == doctest::Approx(best).epsilon(1e-13));
    CHECK(yield_closed_form(dp.sequence) ==
          doctest::Approx(dp.yield).epsilon(1e-13));
  }
}

TEST_CASE("brute force grid search matches the closed-form optimum") {
  for (int n = 1; n <= 3; ++n) {
    const auto r = brute_force_optimal(n, 64);
    const double target = optimal_yield_instantaneous(n);
    CHECK(r.yield <= target + 1e-9);
    CHECK(r.yield >= target - 1e-6);
    // The refined sequence must reproduce its claimed yield.
    CHECK(yield_closed_form(r.sequence) == doctest::Approx(r.yield).epsilon(1e-12));
  }
  CHECK_THROWS_AS(brute_force_optimal(0, 64), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_optimal(7, 64), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_optimal(2, 32), std::invalid_argument);
}
