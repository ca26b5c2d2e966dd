// Copyright 2026 The fanolines Authors
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

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fano/lineshape.hpp"

namespace {

using namespace fano;

RationalQuadratic random_rq(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  RationalQuadratic rq;
  do {
    rq = {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
  } while (!rq.valid() || std::abs(rq.a2) < 1e-3);
  return rq;
}

TEST(FanoProfile, ZeroMaximumAsymptote) {
  for (double q : {0.5, 1.0, 2.0, 3.0, -1.5}) {
    EXPECT_EQ(fano_profile(-q, q), 0.0);
    EXPECT_NEAR(fano_profile(1.0 / q, q), 1.0 + q * q, 1e-12);
  }
  EXPECT_NEAR(fano_profile(1e6, 3.0), 1.0, 1e-5);
  EXPECT_NEAR(fano_profile(-1e6, 3.0), 1.0, 1e-5);
}

TEST(FanoProfile, NonNegative) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 1000; ++i) EXPECT_GE(fano_profile(u(rng), u(rng)), 0.0);
}

TEST(FanoComplexQ, Reductions) {
  EXPECT_DOUBLE_EQ(fano_complex_q(0.7, {2.0, 0.0}), fano_profile(0.7, 2.0));
  EXPECT_DOUBLE_EQ(fano_complex_q(0.0, {0.0, 1.0}), 1.0);
  EXPECT_NEAR(fano_complex_q(-2.0, {2.0, 0.5}), 0.25 / 5.0, 1e-15);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double e = u(rng);
    const ComplexQ q{u(rng), std::abs(u(rng))};
    const double lor = q.q_i * q.q_i / (e * e + 1.0);
    EXPECT_NEAR(fano_complex_q(e, q), fano_profile(e, q.q) + lor, 1e-12 * (1.0 + q.abs2()));
    EXPECT_GE(fano_complex_q(e, q), lor * (1.0 - 1e-15));
  }
}

TEST(Decompose, AlreadyFanoForm) {
  const double q = 3.0;
  const auto d = decompose({q * q, 2.0 * q, 1.0, 1.0, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(d.Delta, 0.0);
  EXPECT_DOUBLE_EQ(d.sigma, 1.0);
  EXPECT_DOUBLE_EQ(d.K_den, 1.0);
  EXPECT_DOUBLE_EQ(d.q, 3.0);
  EXPECT_NEAR(d.D, 0.0, 1e-14);
}

TEST(Decompose, ShiftedDenominator) {
  const RationalQuadratic rq{1.0, 0.0, 1.0, 2.0, 2.0, 1.0};
  const auto d = decompose(rq);
  EXPECT_DOUBLE_EQ(d.Delta, 1.0);
  EXPECT_DOUBLE_EQ(d.sigma, 1.0);
  EXPECT_DOUBLE_EQ(d.K_den, 1.0);
  // The constant term needs the a2 Delta^2 piece: c0 = 1 - 0 + 1.
  EXPECT_DOUBLE_EQ(d.c0, 2.0);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 20; ++i) {
    const double e = u(rng);
    EXPECT_NEAR(d(e), rq(e), 1e-12 * std::abs(rq(e)));
  }
}

TEST(Decompose, ReconstructionIdentityRandom) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 1000; ++k) {
    const RationalQuadratic rq = random_rq(rng);
    const auto d = decompose(rq);
    for (int i = 0; i < 100; ++i) {
      const double e = u(rng);
      const double ref = rq(e);
      ASSERT_LT(std::abs(d(e) - ref), 1e-10 * std::max(std::abs(ref), 1e-300) + 1e-300) << "case " << k;
    }
  }
}

TEST(Decompose, Degenerate) {
  const auto lor = decompose({1.0, 0.5, 0.0, 1.0, 0.0, 1.0});
  EXPECT_TRUE(lor.pure_lorentzian);
  EXPECT_TRUE(std::isnan(lor.q));
  EXPECT_FALSE(lor.complex_q().has_value());
  EXPECT_NEAR(lor(0.3), (1.0 + 0.15) / 1.09, 1e-14);
  EXPECT_THROW(decompose({1, 0, 1, 1, 3, 1}), FitError);  // real denominator roots
  EXPECT_THROW(decompose({1, 0, 1, 1, 0, 0}), FitError);
}

TEST(Fit, RecoversFanoProfile) {
  std::vector<double> e, y;
  for (int i = 0; i <= 10; ++i) {
    e.push_back(-10.0 + 2.0 * i);
    y.push_back(fano_profile(e.back(), 1.0));
  }
  const RationalFit f = fit_rational_quadratic(e, y);
  EXPECT_LT(f.residual, 1e-10);
  EXPECT_NEAR(f.rq.a0, 1.0, 1e-9);
  EXPECT_NEAR(f.rq.a1, 2.0, 1e-9);
  EXPECT_NEAR(f.rq.a2, 1.0, 1e-9);
  EXPECT_NEAR(f.rq.b0, 1.0, 1e-9);
  EXPECT_NEAR(f.rq.b1, 0.0, 1e-9);
}

TEST(Fit, ReportsMisfitOutsideModelClass) {
  std::vector<double> e, y;
  for (int i = 0; i <= 20; ++i) {
    e.push_back(-5.0 + 0.5 * i);
    y.push_back(e.back() * e.back() * e.back() / (1.0 + e.back() * e.back()));
  }
  EXPECT_GT(fit_rational_quadratic(e, y).residual, 1e-3);
}

TEST(Fit, RejectsTooFewOrSingular) {
  const std::vector<double> e{0, 1, 2, 3, 4};
  EXPECT_THROW(fit_rational_quadratic(e, e), FitError);
  const std::vector<double> e6{0, 0, 1, 1, 2, 2, 3};
  EXPECT_THROW(fit_rational_quadratic(e6, e6), FitError);
  const std::vector<double> ez{-3, -2, -1, 0, 1, 2, 3};
  const std::vector<double> zeros(7, 0.0);
  EXPECT_THROW(fit_rational_quadratic(ez, zeros), FitError);
}

}  // namespace
