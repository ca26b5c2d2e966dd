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

#ifndef FANO_GENERAL_MODEL_HPP
#define FANO_GENERAL_MODEL_HPP

// N discrete levels coupled to M wideband continua.
//
// Each continuum a is folded into the discrete block through
//   H_eff - H0 = -i sum_a n pi V V^T,
//   Ltilde     = sum_a sum_b 2 Gamma_b / sum Gamma  n pi V_i V_j |bb>><<ij|,
//   C^(a)_ij   = 2 pi n V_i V_j / sum Gamma,
// and the laser is removed by a rotating frame in which level i sits at
// E_i - photon_index_i * omega_L.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fano/liouville_effective.hpp"
#include "fano/superop.hpp"
#include "fano/types.hpp"

namespace fano {

struct GeneralEffectiveLiouvillian {
  GeneralModel model;
  double omega_L = 0.0;
  MatrixXc H0;
  MatrixXc H_eff;
  MatrixXc L_D;
  MatrixXc Ltilde;
  MatrixXc L_eff;
  std::vector<Eigen::VectorXd> C;          // one N^2 row-major vector per continuum
  std::vector<double> continuum_relaxation;  // sum_b Gamma_b per continuum

  std::size_t size() const { return static_cast<std::size_t>(H0.rows()); }
};

/// Rotating-frame H0: E_i - p_i omega_L on the diagonal, dipoles off it.
inline MatrixXc rotating_frame_h0(const GeneralModel& m, double omega_L) {
  const auto n = static_cast<Eigen::Index>(m.size());
  MatrixXc h = m.dipoles;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Level& l = m.levels[static_cast<std::size_t>(i)];
    h(i, i) = l.energy - l.photon_index * omega_L;
  }
  return h;
}

/// n pi V_i V_j for one continuum.
inline Eigen::MatrixXd continuum_width_matrix(const Continuum& c) {
  const Eigen::Map<const Eigen::VectorXd> v(c.couplings.data(), static_cast<Eigen::Index>(c.couplings.size()));
  return c.density * pi * v * v.transpose();
}

inline GeneralEffectiveLiouvillian build_general(const GeneralModel& model, double omega_L) {
  require_valid(model);
  if (!std::isfinite(omega_L)) throw ModelError("omega_L is not finite");
  const std::size_t n = model.size();
  const auto nn = static_cast<Eigen::Index>(n * n);

  GeneralEffectiveLiouvillian g;
  g.model = model;
  g.omega_L = omega_L;
  g.H0 = rotating_frame_h0(model, omega_L);
  g.H_eff = g.H0;
  g.Ltilde = MatrixXc::Zero(nn, nn);
  for (const Continuum& c : model.continua) {
    const Eigen::MatrixXd w = continuum_width_matrix(c);
    const double total = c.total_relaxation();
    g.H_eff -= I * w.cast<cplx>();
    Eigen::VectorXd coeff(nn);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) coeff(static_cast<Eigen::Index>(vec_index(i, j, n))) = 2.0 * w(i, j) / total;
    for (std::size_t b = 0; b < n; ++b) {
      if (c.relax_rates[b] == 0.0) continue;
      g.Ltilde.row(static_cast<Eigen::Index>(vec_index(b, b, n))) += (c.relax_rates[b] * coeff.transpose()).cast<cplx>();
    }
    g.C.push_back(coeff);
    g.continuum_relaxation.push_back(total);
  }

  g.L_D = MatrixXc::Zero(nn, nn);
  for (const Jump& j : model.jumps) {
    MatrixXc d = MatrixXc::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    d(static_cast<Eigen::Index>(j.to), static_cast<Eigen::Index>(j.from)) = 1.0;
    g.L_D += lindblad_superop(d, j.rate);
  }
  for (const Dephasing& d : model.dephasings) g.L_D += dephasing_superop(n, d.i, d.j, d.rate);

  g.L_eff = hamiltonian_superop(g.H_eff) + g.Ltilde + g.L_D;
  return g;
}

/// Dimension of the numerical kernel of a generator and the singular
/// values that decided it.
struct KernelReport {
  Eigen::Index dimension = 0;
  double sigma_max = 0.0;
  double sigma_last = 0.0;        // smallest
  double sigma_second_last = 0.0;  // second smallest
};

inline KernelReport kernel_report(const Eigen::MatrixXd& g) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const Eigen::VectorXd& s = svd.singularValues();
  KernelReport r;
  const Eigen::Index k = s.size();
  r.sigma_max = s(0);
  r.sigma_last = s(k - 1);
  r.sigma_second_last = k > 1 ? s(k - 2) : 0.0;
  for (Eigen::Index i = 0; i < k; ++i) r.dimension += s(i) <= 1e-10 * r.sigma_max ? 1 : 0;
  return r;
}

/// Normalized kernel of L_eff. The generator is written on real Hermitian
/// coordinates, its kernel checked to be one-dimensional, and the
/// normalization trace + sum_a C^(a).rho = 1 appended before a
/// least-squares solve.
inline DensityMatrixP general_steady_state(const GeneralEffectiveLiouvillian& gel) {
  const std::size_t n = gel.size();
  const HermitianCoordinates hc(n);
  const Eigen::MatrixXd g = hc.real_generator(gel.L_eff);
  const KernelReport kr = kernel_report(g);
  if (kr.dimension != 1) {
    throw SolverError("degenerate steady state: null-space dimension " + std::to_string(kr.dimension) +
                      " (expected 1)");
  }
  if (kr.sigma_last > 0.0 && !(kr.sigma_second_last > 1e6 * kr.sigma_last)) {
    throw SolverError("degenerate steady state: kernel not separated (sigma ratio " +
                      std::to_string(kr.sigma_second_last / kr.sigma_last) + ")");
  }

  const auto dim = static_cast<Eigen::Index>(hc.size());
  Eigen::MatrixXd a(dim + 1, dim);
  a.topRows(dim) = g;
  for (Eigen::Index p = 0; p < dim; ++p) {
    const MatrixXc b = hc.basis(static_cast<std::size_t>(p));
    double w = b.trace().real();
    const VectorXc vb = vectorize(b);
    for (const Eigen::VectorXd& c : gel.C) w += (c.cast<cplx>().transpose() * vb)(0).real();
    a(dim, p) = w;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim + 1);
  rhs(dim) = 1.0;
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(rhs);

  DensityMatrixP out;
  out.rho = hc.matrix(x);
  const VectorXc v = vectorize(out.rho);
  for (const Eigen::VectorXd& c : gel.C) out.continuum_pops.push_back((c.cast<cplx>().transpose() * v)(0).real());
  return out;
}

/// int dk_a rho_{k_a j} = -i pi n_a sum_i V_i rho_ij, one length-N vector
/// per continuum (single-pole wideband rule).
inline std::vector<VectorXc> continuum_coherences(const GeneralEffectiveLiouvillian& gel, const DensityMatrixP& ss) {
  std::vector<VectorXc> out;
  for (const Continuum& c : gel.model.continua) {
    const Eigen::Map<const Eigen::VectorXd> v(c.couplings.data(), static_cast<Eigen::Index>(c.couplings.size()));
    out.push_back(-I * pi * c.density * (ss.rho.transpose() * v.cast<cplx>()));
  }
  return out;
}

/// Photon absorption rate: -2 Im of the field-weighted polarization
/// sum over ground-manifold i of (sum_j mu_ij rho_ji + sum_a V_i^(a) int dk rho_{k_a i}),
/// with j running over the one-photon manifold.
inline double absorption(const GeneralEffectiveLiouvillian& gel, const DensityMatrixP& ss) {
  const GeneralModel& m = gel.model;
  const auto x = continuum_coherences(gel, ss);
  cplx pol = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.levels[i].photon_index != 0) continue;
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m.levels[j].photon_index != 1) continue;
      pol += m.dipoles(ii, static_cast<Eigen::Index>(j)) * ss.rho(static_cast<Eigen::Index>(j), ii);
    }
    for (std::size_t a = 0; a < m.continua.size(); ++a) pol += m.continua[a].couplings[i] * x[a](ii);
  }
  return -2.0 * pol.imag();
}

/// sum_a Gamma^(a) P_a / rho_00, with level 0 as the ground state.
inline double transport_rate(const GeneralEffectiveLiouvillian& gel, const DensityMatrixP& ss) {
  const double gg = ss.population(0);
  if (!(gg > 1e-300)) throw SolverError("transport_rate: rho_00 = 0, the ground state is fully depleted");
  double flux = 0.0;
  for (std::size_t a = 0; a < ss.continuum_pops.size(); ++a) flux += gel.continuum_relaxation[a] * ss.continuum_pops[a];
  return flux / gg;
}

// Canned models. All are dimensionless with n = 1/pi, so n pi V_i V_j = V_i V_j.

struct ModelAtField {
  GeneralModel model;
  double omega_L = 0.0;
};

/// The single resonance of FanoParams: g (E=0, p=0), e (E=0, p=1),
/// omega_L = eps, couplings (Omega, 1), dipole q*Omega.
inline ModelAtField two_level_model(const FanoParams& p) {
  require_valid(p);
  ModelAtField out;
  GeneralModel& m = out.model;
  m.levels = {{0.0, 0}, {0.0, 1}};
  m.dipoles = MatrixXc::Zero(2, 2);
  m.dipoles(0, 1) = m.dipoles(1, 0) = p.q * p.Omega;
  Continuum c;
  c.couplings = {p.Omega, 1.0};
  c.relax_rates = {p.Gamma_cg, p.Gamma_ce};
  m.continua = {c};
  if (p.Gamma_e > 0.0) m.jumps.push_back({1, 0, 2.0 * p.Gamma_e});
  if (p.gamma_eg > 0.0) m.dephasings.push_back({0, 1, p.gamma_eg});
  m.reference = {0, 1};
  out.omega_L = p.epsilon;
  return out;
}

/// g, e1, e2 on one continuum; units n pi V_1^2 = 1, beta = V_1 / V_2,
/// delta = E_2 - E_1. The continuum relaxes only into g.
inline ModelAtField three_level_model(double epsilon, double q1, double q2, double Omega, double beta, double delta,
                                      double Gamma_c) {
  if (!(beta > 0.0)) throw ModelError("three_level_model: beta = V1/V2 must be > 0");
  ModelAtField out;
  GeneralModel& m = out.model;
  m.levels = {{0.0, 0}, {0.0, 1}, {delta, 1}};
  m.dipoles = MatrixXc::Zero(3, 3);
  m.dipoles(0, 1) = m.dipoles(1, 0) = q1 * Omega;
  m.dipoles(0, 2) = m.dipoles(2, 0) = q2 * Omega / beta;
  Continuum c;
  c.couplings = {Omega, 1.0, 1.0 / beta};
  c.relax_rates = {Gamma_c, 0.0, 0.0};
  m.continua = {c};
  m.reference = {0, 1};
  out.omega_L = epsilon;
  return out;
}

/// One excited level on two continua, gamma_n^2 = V_n^2 / (V_1^2 + V_2^2)
/// in units n pi (V_1^2 + V_2^2) = 1. `mu` is the direct g-e coupling
/// (the q entry of the displayed H_eff). Both continua relax into g.
inline ModelAtField two_continua_model(double epsilon, double mu, double Omega1, double Omega2, double V1, double V2,
                                       double Gamma_c1, double Gamma_c2) {
  const double norm = V1 * V1 + V2 * V2;
  if (!(norm > 0.0)) throw ModelError("two_continua_model: V1^2 + V2^2 must be > 0");
  const double g1 = std::abs(V1) / std::sqrt(norm);
  const double g2 = std::abs(V2) / std::sqrt(norm);
  ModelAtField out;
  GeneralModel& m = out.model;
  m.levels = {{0.0, 0}, {0.0, 1}};
  m.dipoles = MatrixXc::Zero(2, 2);
  m.dipoles(0, 1) = m.dipoles(1, 0) = mu;
  Continuum a;
  a.couplings = {g1 * Omega1, g1};
  a.relax_rates = {Gamma_c1, 0.0};
  Continuum b;
  b.couplings = {g2 * Omega2, g2};
  b.relax_rates = {Gamma_c2, 0.0};
  m.continua = {a, b};
  m.reference = {0, 1};
  out.omega_L = epsilon;
  return out;
}

/// Three levels (0, 1, 2) and two continua A, B with the couplings and
/// rates of the two-resonance example shipped in configs/fig5.json.
inline GeneralModel fig5_model() {
  GeneralModel m;
  m.levels = {{0.0, 0}, {10.0, 1}, {20.0, 1}};
  m.dipoles = MatrixXc::Zero(3, 3);
  m.dipoles(0, 1) = m.dipoles(1, 0) = 0.3;
  m.dipoles(0, 2) = m.dipoles(2, 0) = 0.4;
  Continuum a;
  a.couplings = {0.05, 0.1, 0.2};
  a.relax_rates = {0.5, 0.0, 0.0};
  Continuum b;
  b.couplings = {0.1, 0.3, 0.02};
  b.relax_rates = {0.7, 0.0, 0.0};
  m.continua = {a, b};
  m.jumps = {{2, 0, 0.05}, {1, 0, 0.04}};
  m.reference = {0, 1};
  return m;
}

}  // namespace fano

#endif  // FANO_GENERAL_MODEL_HPP
