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

#include "fano/liouville_effective.hpp"

namespace {

using namespace fano;

FanoParams random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FanoParams p;
  p.epsilon = -10.0 + 20.0 * u(rng);
  p.q = -5.0 + 10.0 * u(rng);
  p.Omega = 2.0 * u(rng);
  p.Gamma_e = u(rng);
  p.Gamma_cg = 0.01 + 5.0 * u(rng);
  p.Gamma_ce = u(rng) < 0.5 ? 0.0 : 5.0 * u(rng);
  p.gamma_eg = 2.0 * u(rng);
  return p;
}

FanoParams weak(double eps) {
  FanoParams p;
  p.epsilon = eps;
  p.q = 1.0;
  p.Omega = 0.05;
  p.Gamma_e = 0.1;
  p.Gamma_cg = 1.0;
  return p;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// The displayed 4x4 matrix in {gg, ge, eg, ee}, with the ee entry
// -2 - 2 Gamma_e that trace preservation requires.
Eigen::Matrix4cd displayed(const FanoParams& p) {
  const cplx k(1.0, p.q);
  const cplx ko = k * p.Omega;
  const cplx kc = std::conj(k) * p.Omega;
  const cplx a(-p.Gamma_e - p.Omega * p.Omega - p.gamma_eg - 1.0, -p.epsilon);
  Eigen::Matrix4cd m;
  m << 0.0, ko, kc, 2.0 * p.Gamma_e + 2.0,
      -kc, a, 0.0, -ko,
      -ko, 0.0, std::conj(a), -kc,
      0.0, -ko, -kc, -2.0 - 2.0 * p.Gamma_e;
  return m;
}

TEST(EffectiveLiouvillian, MatchesDisplayedMatrix) {
  std::mt19937 rng(1);
  for (int i = 0; i < 200; ++i) {
    FanoParams p = random_params(rng);
    p.Gamma_ce = 0.0;
    const auto l = build_effective_liouvillian(p);
    EXPECT_LT((l.L_eff - displayed(p)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(l.K, cplx(1.0, p.q));
    EXPECT_NEAR(std::abs(l.A - displayed(p)(kGE, kGE)), 0.0, 1e-15);
  }
}

TEST(EffectiveLiouvillian, ScalarEntries) {
  FanoParams p;
  p.q = 1.0;
  p.Omega = 0.1;
  const auto l = build_effective_liouvillian(p);
  EXPECT_NEAR(std::abs(l.A - cplx(-1.01, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(l.C(kGG), 2.0 * 0.01, 1e-17);
  EXPECT_NEAR(l.C(kGE), 2.0 * 0.1, 1e-16);
  EXPECT_NEAR(l.C(kEE), 2.0, 1e-16);
}

// L_eff = -i (H (x) 1 - 1 (x) conj(H)) + Ltilde + L_D, each side built independently.
TEST(EffectiveLiouvillian, DecompositionIdentity) {
  std::mt19937 rng(2);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  for (int i = 0; i < 500; ++i) {
    const FanoParams p = random_params(rng);
    const double b = p.beta();
    const double w = p.Omega;
    Eigen::Matrix2cd h;
    h << cplx(0, -w * w), w * cplx(p.q, -1), w * cplx(p.q, -1), cplx(-p.epsilon, -1);
    Eigen::Matrix4d lt = Eigen::Matrix4d::Zero();
    const Eigen::RowVector4d jump(2 * w * w, 2 * w, 2 * w, 2);
    lt.row(0) = b * jump;
    lt.row(3) = (1 - b) * jump;
    Eigen::Matrix4cd ld = Eigen::Matrix4cd::Zero();
    ld(0, 3) = 2 * p.Gamma_e;
    ld(3, 3) = -2 * p.Gamma_e;
    ld(1, 1) = ld(2, 2) = -p.Gamma_e - p.gamma_eg;
    const Eigen::Matrix4cd rhs = -I * (kron2(h, id) - kron2(id, h.conjugate())) + lt.cast<cplx>() + ld;
    const auto l = build_effective_liouvillian(p);
    EXPECT_LT((l.L_eff - rhs).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((l.H_eff - h).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((l.Ltilde - lt).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(EffectiveLiouvillian, CoherenceConjugationSymmetry) {
  std::mt19937 rng(3);
  Eigen::Matrix4d swap = Eigen::Matrix4d::Zero();
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  for (int i = 0; i < 100; ++i) {
    const auto l = build_effective_liouvillian(random_params(rng));
    const Eigen::Matrix4cd s = swap.cast<cplx>() * l.L_eff * swap.cast<cplx>();
    EXPECT_LT((s - l.L_eff.conjugate()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(EffectiveLiouvillian, TracePreservingWithContinuum) {
  // d/dt (rho_gg + rho_ee + P_c) = 0: populations plus Gamma_c * C . rho
  // leave through the anti-Hermitian part and come back through Ltilde.
  std::mt19937 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto l = build_effective_liouvillian(random_params(rng));
    const Eigen::RowVector4cd pop_rows = l.L_eff.row(kGG) + l.L_eff.row(kEE);
    EXPECT_LT(pop_rows.cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(CramerSystem, BetaOneEntries) {
  FanoParams p = weak(0.3);
  p.gamma_eg = 0.2;
  const CramerSystem s = cramer_system(p);
  const Eigen::Matrix4cd d = displayed(p);
  EXPECT_LT((s.M - d.block<3, 3>(0, 0)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::abs(s.b(0) - (-2.0 * p.Gamma_e - 2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.b(1) - cplx(1.0, p.q) * p.Omega), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.b(2) - cplx(1.0, -p.q) * p.Omega), 0.0, 1e-15);
}

TEST(CramerSystem, GeneralBetaEntries) {
  FanoParams p = weak(0.3);
  p.Gamma_cg = 0.3;
  p.Gamma_ce = 0.7;
  const double b = p.beta();
  const double w = p.Omega;
  const CramerSystem s = cramer_system(p);
  const cplx bb = -w * cplx(1.0, p.q);
  EXPECT_NEAR(std::abs(s.M(0, 0) - 2.0 * w * w * (b - 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.M(0, 1) - w * cplx(2.0 * b - 1.0, p.q)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.M(0, 2) - w * cplx(2.0 * b - 1.0, -p.q)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.M(1, 0) - std::conj(bb)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.M(2, 0) - bb), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.b(0) + 2.0 * b + 2.0 * p.Gamma_e), 0.0, 1e-15);
}

TEST(SteadyState, DarkStateWithoutField) {
  FanoParams p;
  p.Gamma_e = 1.0;
  const DensityMatrixP ss = steady_state(p);
  EXPECT_NEAR(ss.population(0), 1.0, 1e-15);
  EXPECT_NEAR(ss.continuum_pops[0], 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ss.rho(0, 1)), 0.0, 1e-15);
}

TEST(SteadyState, ReferenceValues) {
  const DensityMatrixP ss = steady_state(weak(0.0));
  EXPECT_NEAR(ss.continuum_pops[0], 0.0041041284123, 1e-12);
  EXPECT_NEAR(ss.population(0), 0.99180679, 1e-8);
  EXPECT_NEAR(ss.rho(0, 1).real(), -0.04516535, 1e-8);
  EXPECT_NEAR(ss.population(1), 0.00408908, 1e-8);
}

TEST(SteadyState, KernelNormalizationPositivity) {
  std::mt19937 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const FanoParams p = random_params(rng);
    const DensityMatrixP ss = steady_state(p);
    const auto l = build_effective_liouvillian(p);
    ASSERT_LT((l.L_eff * vectorize(ss.rho)).norm(), 1e-12) << i;
    ASSERT_TRUE(check_density(ss, 1e-10).empty()) << i << ": " << join(check_density(ss, 1e-10));
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(ss.rho);
    ASSERT_GE(es.eigenvalues().minCoeff(), -1e-10) << i;
  }
}

TEST(SteadyState, CramerMatchesNullVector) {
  std::mt19937 rng(6);
  for (int i = 0; i < 1000; ++i) {
    const FanoParams p = random_params(rng);
    const auto l = build_effective_liouvillian(p);
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(l.L_eff, Eigen::ComputeFullV);
    Eigen::Vector4cd nv = svd.matrixV().col(3);
    nv /= nv(kGG) + nv(kEE) + l.C.cast<cplx>().dot(nv);
    const DensityMatrixP cr = cramer_steady_state(p);
    EXPECT_LT((vectorize(cr.rho) - nv).cwiseAbs().maxCoeff(), 1e-10) << i;
    const DensityMatrixP lu = steady_state(p);
    EXPECT_LT((cr.rho - lu.rho).cwiseAbs().maxCoeff(), 1e-10) << i;
  }
}

TEST(SteadyState, DegenerateKernelRejected) {
  // Ground state dark and continuum feeding only e: two steady states.
  FanoParams p;
  p.Gamma_cg = 0.0;
  p.Gamma_ce = 1.0;
  EXPECT_THROW(steady_state(p), SolverError);
  EXPECT_THROW(cramer_steady_state(p), SolverError);
  p.Gamma_ce = 0.0;
  EXPECT_THROW(steady_state(p), ModelError);
}

TEST(Transport, IndependentOfContinuumRelaxation) {
  for (double eps : {-3.0, -0.4, 0.0, 2.5}) {
    FanoParams p = weak(eps);
    p.Gamma_cg = 1.0;
    const double r1 = transport_rate(p);
    for (double gc : {0.01, 100.0}) {
      p.Gamma_cg = gc;
      EXPECT_NEAR(transport_rate(p) / r1, 1.0, 1e-10);
    }
  }
}

TEST(Transport, WeakFieldLimit) {
  FanoParams p;
  p.q = 1.0;
  p.Omega = 0.01;
  for (int i = 0; i <= 100; ++i) {
    p.epsilon = -5.0 + 0.1 * i;
    const double ref = weak_field_rate(p.epsilon, p.q, p.Omega);
    const double r = transport_rate(p);
    if (ref > 0.0) {
      EXPECT_LT(std::abs(r - ref) / ref, 0.01) << p.epsilon;
    } else {
      EXPECT_LT(r, 5e-8);
    }
  }
}

TEST(Transport, FanoZero) {
  FanoParams p;
  p.q = 1.0;
  p.epsilon = -1.0;
  p.Omega = 0.01;
  EXPECT_LT(transport_rate(p), 5e-8);
}

TEST(Transport, ErrorScalesAsOmegaFourth) {
  std::vector<double> c;
  for (double w : {0.1, 0.03, 0.01}) {
    FanoParams p;
    p.q = 1.0;
    p.Omega = w;
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      p.epsilon = -5.0 + 0.05 * i;
      const double dev = std::abs(transport_rate(p) - weak_field_rate(p.epsilon, p.q, w));
      worst = std::max(worst, dev / (std::pow(w, 4) * std::pow(1.0 + p.q * p.q, 2)));
    }
    c.push_back(worst);
  }
  for (double v : c) {
    EXPECT_GT(v, 0.5 * c.back());
    EXPECT_LT(v, 2.0 * c.back());
  }
}

TEST(Transport, DepletedGroundRejected) {
  DensityMatrixP ss;
  ss.rho = MatrixXc::Zero(2, 2);
  ss.rho(1, 1) = 1.0;
  ss.continuum_pops = {0.0};
  EXPECT_THROW(transport_rate(weak(0.0), ss), SolverError);
}

TEST(Absorption, FluxBalance) {
  // Absorbed photons = excited decay + continuum relaxation into g.
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    const FanoParams p = random_params(rng);
    const DensityMatrixP ss = steady_state(p);
    const double w = absorption(p, ss);
    const double sink = 2.0 * p.Gamma_e * ss.population(1) + p.beta() * p.Gamma_c() * ss.continuum_pops[0];
    EXPECT_NEAR(w, sink, 1e-12 * (1.0 + std::abs(w)));
  }
}

TEST(Sweep, RationalQuadraticWithHeldOutPoints) {
  std::vector<double> fit_eps;
  for (int i = 0; i <= 10; ++i) fit_eps.push_back(-10.0 + 2.0 * i);
  const SweepResult r = lineshape_sweep(weak(0.0), fit_eps, Observable::ContinuumPopulation);
  ASSERT_TRUE(r.fit.has_value());
  double ymax = 0.0;
  for (double v : r.values) ymax = std::max(ymax, v);
  for (int i = 0; i < 50; ++i) {
    FanoParams p = weak(-9.7 + 0.39 * i);
    const double v = steady_state(p).continuum_pops[0];
    EXPECT_LT(std::abs(r.fit->rq(p.epsilon) - v) / ymax, 1e-8);
  }
  EXPECT_GE(r.decomposition->D, -1e-10);
}

TEST(Sweep, DephasingAddsLorentzian) {
  std::vector<double> eps;
  for (int i = 0; i <= 10; ++i) eps.push_back(-10.0 + 2.0 * i);
  FanoParams p;
  p.q = 1.0;
  p.Omega = 0.05;
  const SweepResult clean = lineshape_sweep(p, eps, Observable::ContinuumPopulation);
  ASSERT_TRUE(clean.decomposition.has_value());
  const auto& d0 = *clean.decomposition;
  EXPECT_LT(d0.D / (d0.q * d0.q + d0.D), 0.05);
  p.gamma_eg = 10.0;
  const SweepResult noisy = lineshape_sweep(p, eps, Observable::ContinuumPopulation);
  ASSERT_TRUE(noisy.decomposition.has_value());
  EXPECT_GT(noisy.decomposition->D, d0.D);
}

TEST(Sweep, ZeroFieldIsZero) {
  FanoParams p = weak(0.0);
  p.Omega = 0.0;
  const std::vector<double> eps{-2, -1, 0, 1, 2, 3, 4};
  const SweepResult r = lineshape_sweep(p, eps, Observable::ContinuumPopulation);
  for (double v : r.values) EXPECT_EQ(v, 0.0);
  EXPECT_FALSE(r.fit.has_value());
}

TEST(Sweep, IncoherentHoppingStillRationalQuadratic) {
  std::vector<double> eps;
  for (int i = 0; i <= 10; ++i) eps.push_back(-10.0 + 2.0 * i);
  FanoParams p = weak(0.0);
  p.Gamma_cg = 0.5;
  p.Gamma_ce = 0.5;
  const SweepResult r = lineshape_sweep(p, eps, Observable::ContinuumPopulation);
  ASSERT_TRUE(r.fit.has_value());
  EXPECT_LT(r.fit->residual, 1e-10);
}

TEST(Sweep, ContinuumDephasingIgnoredBitwise) {
  std::vector<double> eps;
  for (int i = 0; i <= 20; ++i) eps.push_back(-5.0 + 0.5 * i);
  for (Observable o : {Observable::ContinuumPopulation, Observable::TransportRate, Observable::Absorption}) {
    FanoParams p = weak(0.0);
    const SweepResult a = lineshape_sweep(p, eps, o);
    p.gamma_kg = 5.0;
    p.gamma_ke = 5.0;
    const SweepResult b = lineshape_sweep(p, eps, o);
    EXPECT_EQ(a.values, b.values);
  }
}

TEST(Observable, ParseRoundTrip) {
  for (Observable o : {Observable::ContinuumPopulation, Observable::TransportRate, Observable::Absorption}) {
    EXPECT_EQ(parse_observable(to_string(o)), o);
  }
  EXPECT_THROW(parse_observable("population"), ModelError);
}

}  // namespace
