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

#ifndef FANO_LIOUVILLE_EFFECTIVE_HPP
#define FANO_LIOUVILLE_EFFECTIVE_HPP

// Steady state of a single Fano resonance coupled to a Markovian bath.
//
// The continuum is folded into a 4x4 effective Liouvillian on the
// discrete levels {g, e}. Liouville vectors use the row-major order
// {gg, ge, eg, ee} of superop.hpp.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fano/lineshape.hpp"
#include "fano/parallel.hpp"
#include "fano/scattering.hpp"
#include "fano/superop.hpp"
#include "fano/types.hpp"

namespace fano {

enum TwoLevelIndex : Eigen::Index { kGG = 0, kGE = 1, kEG = 2, kEE = 3 };

struct EffectiveLiouvillian4 {
  Eigen::Matrix4cd L_eff;
  Eigen::Matrix2cd H_eff;
  Eigen::Matrix4d Ltilde;  // trace-restoring jumps out of the continuum
  Eigen::Matrix4cd L_D;    // Gamma_e decay and gamma_eg dephasing
  Eigen::Vector4d C;       // continuum population = C . vec(rho)
  cplx K;                  // 1 + i q
  cplx A;                  // -Gamma_e - W^2 - i eps - gamma_eg - 1
  double beta = 1.0;
};

inline void require_valid(const FanoParams& p) {
  auto v = validate(p);
  if (!v.empty()) throw ModelError("invalid parameters: " + join(v));
}

/// Couplings of (g, e) to the continuum in units where n*pi*V_e^2 = 1.
inline Eigen::Vector2d continuum_couplings(const FanoParams& p) { return {p.Omega, 1.0}; }

inline EffectiveLiouvillian4 build_effective_liouvillian(const FanoParams& p) {
  require_valid(p);
  EffectiveLiouvillian4 out;
  out.beta = p.beta();
  out.K = cplx(1.0, p.q);
  out.A = cplx(-p.Gamma_e - p.Omega * p.Omega - p.gamma_eg - 1.0, -p.epsilon);
  out.H_eff = build_heff(p);

  const Eigen::Vector2d v = continuum_couplings(p);
  Eigen::RowVector4d flux;  // 2 n pi V_i V_j, the rate of loss into the continuum
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) flux(i * 2 + j) = 2.0 * v(i) * v(j);
  out.Ltilde.setZero();
  out.Ltilde.row(kGG) = out.beta * flux;
  out.Ltilde.row(kEE) = (1.0 - out.beta) * flux;
  out.C = flux.transpose() / p.Gamma_c();

  MatrixXc decay = MatrixXc::Zero(2, 2);
  decay(0, 1) = 1.0;  // |g><e|
  out.L_D = lindblad_superop(decay, 2.0 * p.Gamma_e) + dephasing_superop(2, 0, 1, p.gamma_eg);

  out.L_eff = hamiltonian_superop(out.H_eff) + out.Ltilde.cast<cplx>() + out.L_D;
  return out;
}

/// Rows gg, ge, eg of L_eff with rho_ee = 1 moved to the right-hand side:
/// M (rho_gg, rho_ge, rho_eg) = b.
struct CramerSystem {
  Eigen::Matrix3cd M;
  Eigen::Vector3cd b;
};

inline CramerSystem cramer_system(const FanoParams& p) {
  const auto l = build_effective_liouvillian(p);
  CramerSystem s;
  s.M = l.L_eff.block<3, 3>(0, 0);
  s.b = -l.L_eff.block<3, 1>(0, kEE);
  return s;
}

namespace detail {

inline DensityMatrixP normalized(const Eigen::Vector4cd& x, const Eigen::Vector4d& c) {
  const cplx norm = x(kGG) + x(kEE) + c.cast<cplx>().dot(x);
  DensityMatrixP out;
  out.rho.resize(2, 2);
  out.rho << x(kGG), x(kGE), x(kEG), x(kEE);
  out.rho /= norm;
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
  out.continuum_pops = {c.dot(vectorize(out.rho).real())};
  return out;
}

}  // namespace detail

/// Kernel of L_eff normalized so that rho_gg + rho_ee + continuum = 1.
/// The dependent ee row is replaced by the normalization constraint.
inline DensityMatrixP steady_state(const FanoParams& p) {
  const auto l = build_effective_liouvillian(p);
  Eigen::Matrix4cd a = l.L_eff;
  a.row(kEE) = l.C.cast<cplx>().transpose();
  a(kEE, kGG) += 1.0;
  a(kEE, kEE) += 1.0;
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw SolverError("steady_state: kernel of the effective Liouvillian is not one-dimensional");
  }
  Eigen::Vector4cd rhs = Eigen::Vector4cd::Zero();
  rhs(kEE) = 1.0;
  return detail::normalized(lu.solve(rhs), l.C);
}

/// Cross-check path: unnormalized rho' = (det M1, det M2, det M3, det M)
/// from Cramer's rule on the 3x3 reduction.
inline DensityMatrixP cramer_steady_state(const FanoParams& p) {
  const auto l = build_effective_liouvillian(p);
  const CramerSystem s{l.L_eff.block<3, 3>(0, 0), -l.L_eff.block<3, 1>(0, kEE)};
  const cplx det = s.M.determinant();
  if (std::abs(det) <= 1e-14 * std::max(1.0, s.M.cwiseAbs().maxCoeff())) {
    if (s.b.norm() > 0.0) throw SolverError("cramer_steady_state: det(M) = 0, no steady state with rho_ee != 0");
    throw SolverError("cramer_steady_state: generator has a non-unique kernel");
  }
  Eigen::Vector4cd x;
  for (int i = 0; i < 3; ++i) {
    Eigen::Matrix3cd mi = s.M;
    mi.col(i) = s.b;
    x(i) = mi.determinant();
  }
  x(kEE) = det;
  return detail::normalized(x, l.C);
}

/// Stationary ground-to-continuum transfer rate r = Gamma_c * P_c / rho_gg.
inline double transport_rate(const FanoParams& p, const DensityMatrixP& ss) {
  const double gg = ss.population(0);
  if (!(gg > 1e-300)) throw SolverError("transport_rate: rho_gg = 0, the ground state is fully depleted");
  return p.Gamma_c() * ss.continuum_pops.at(0) / gg;
}

inline double transport_rate(const FanoParams& p) { return transport_rate(p, steady_state(p)); }

/// int dk rho_kj for j in {g, e}, in units where n*pi*V_e^2 = 1:
/// -i sum_i v_i rho_ij from the single-pole wideband integral.
inline Eigen::Vector2cd continuum_coherences(const FanoParams& p, const DensityMatrixP& ss) {
  const Eigen::Vector2d v = continuum_couplings(p);
  return -I * (ss.rho.transpose() * v.cast<cplx>());
}

/// Photon absorption rate -2 Im(mu_e F/2 rho_eg + int dk mu_c F/2 rho_kg),
/// the imaginary part of the field-weighted polarization.
inline double absorption(const FanoParams& p, const DensityMatrixP& ss) {
  const Eigen::Vector2cd x = continuum_coherences(p, ss);
  const cplx polarization = p.q * p.Omega * ss.rho(1, 0) + p.Omega * x(0);
  return -2.0 * polarization.imag();
}

enum class Observable { ContinuumPopulation, TransportRate, Absorption };

inline std::string to_string(Observable o) {
  switch (o) {
    case Observable::ContinuumPopulation: return "continuum_pop";
    case Observable::TransportRate: return "transport_rate";
    case Observable::Absorption: return "absorption";
  }
  return "?";
}

inline Observable parse_observable(const std::string& s) {
  if (s == "continuum_pop") return Observable::ContinuumPopulation;
  if (s == "transport_rate") return Observable::TransportRate;
  if (s == "absorption") return Observable::Absorption;
  throw ModelError("unknown observable '" + s + "' (continuum_pop | transport_rate | absorption)");
}

inline double observe(const FanoParams& p, Observable o) {
  const DensityMatrixP ss = steady_state(p);
  switch (o) {
    case Observable::ContinuumPopulation: return ss.continuum_pops[0];
    case Observable::TransportRate: return transport_rate(p, ss);
    case Observable::Absorption: return absorption(p, ss);
  }
  return 0.0;
}

struct SweepResult {
  Observable observable = Observable::ContinuumPopulation;
  std::vector<double> epsilon;
  std::vector<double> values;
  std::optional<RationalFit> fit;
  std::optional<LineshapeDecomposition> decomposition;
  std::string note;  // why fit or decomposition is missing
};

/// Observable over an epsilon grid, with a rational-quadratic fit and
/// its Fano-plus-Lorentzian decomposition when one can be formed.
inline SweepResult lineshape_sweep(const FanoParams& tmpl, std::span<const double> eps, Observable o) {
  SweepResult out;
  out.observable = o;
  out.epsilon.assign(eps.begin(), eps.end());
  out.values.resize(eps.size());
  parallel_for(eps.size(), [&](std::size_t i) {
    FanoParams p = tmpl;
    p.epsilon = eps[i];
    out.values[i] = observe(p, o);
  });
  bool all_zero = true;
  for (double v : out.values) all_zero = all_zero && v == 0.0;
  if (all_zero) {
    out.note = "observable vanishes identically";
    return out;
  }
  try {
    out.fit = fit_rational_quadratic(out.epsilon, out.values);
    out.decomposition = decompose(out.fit->rq);
  } catch (const FitError& e) {
    out.note = e.what();
  }
  return out;
}

}  // namespace fano

#endif  // FANO_LIOUVILLE_EFFECTIVE_HPP
