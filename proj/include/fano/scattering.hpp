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

#ifndef FANO_SCATTERING_HPP
#define FANO_SCATTERING_HPP

// Hilbert-space solution of the driven discrete-continuum problem: the
// ground state survival amplitude follows from the two poles of the
// projected resolvent G_gg(z) = (z + eps + i) / ((z - z1)(z - z2)).

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fano/parallel.hpp"
#include "fano/types.hpp"

namespace fano {

/// [[-i W^2, W(q - i)], [W(q - i), -eps - i]] in the basis {g, e}.
inline Eigen::Matrix2cd build_heff(const FanoParams& p) {
  const double w = p.Omega;
  Eigen::Matrix2cd h;
  h << cplx(0.0, -w * w), w * cplx(p.q, -1.0),
      w * cplx(p.q, -1.0), cplx(-p.epsilon, -1.0);
  return h;
}

/// Poles and residues of G_gg. z1 is the slow pole (decay rate Gamma0),
/// fixed by taking the root omega with Im(omega) >= 0 and
/// z1 = -(omega0 - omega)/2, z2 = -(omega0 + omega)/2.
struct PoleData {
  cplx z1, z2;
  cplx omega0, omega;
  cplx a1, a2;
  double Gamma0 = 0.0, Gamma1 = 0.0, Gamma2 = 0.0;
  /// omega ~ 0: double pole, U(t) = (1 + c t) exp(-i z1 t).
  bool confluent = false;
  cplx confluent_c;
};

/// The radicand of omega, written out as in the closed form.
inline cplx omega_squared(const FanoParams& p) {
  const double w2 = p.Omega * p.Omega;
  const cplx e_i(p.epsilon, 1.0);
  return e_i * e_i - 2.0 * w2 * cplx(1.0 - 2.0 * p.q * p.q, 4.0 * p.q + p.epsilon) - w2 * w2;
}

inline PoleData poles_with_branch(const FanoParams& p, bool upper_branch) {
  PoleData d;
  d.omega0 = cplx(p.epsilon, 1.0 + p.Omega * p.Omega);
  cplx w = std::sqrt(omega_squared(p));
  if (w.imag() < 0.0) w = -w;
  d.omega = upper_branch ? w : -w;
  d.z1 = -0.5 * (d.omega0 - d.omega);
  d.z2 = -0.5 * (d.omega0 + d.omega);
  const cplx shift(p.epsilon, 1.0);
  if (std::abs(d.omega) < 1e-9 * std::abs(d.omega0)) {
    d.confluent = true;
    d.z1 = d.z2 = -0.5 * d.omega0;
    d.a1 = 1.0;
    d.a2 = 0.0;
    d.confluent_c = -I * (d.z1 + shift);
  } else {
    d.a1 = (d.z1 + shift) / (d.z1 - d.z2);
    d.a2 = (d.z2 + shift) / (d.z2 - d.z1);
  }
  d.Gamma1 = 1.0 + p.Omega * p.Omega;
  d.Gamma0 = d.Gamma1 - d.omega.imag();
  d.Gamma2 = d.Gamma1 + d.omega.imag();
  return d;
}

inline PoleData poles(const FanoParams& p) { return poles_with_branch(p, true); }

/// U_gg(t) = a1 exp(-i z1 t) + a2 exp(-i z2 t).
inline cplx survival_amplitude(const PoleData& d, double t) {
  if (d.confluent) return (1.0 + d.confluent_c * t) * std::exp(-I * d.z1 * t);
  return d.a1 * std::exp(-I * d.z1 * t) + d.a2 * std::exp(-I * d.z2 * t);
}

inline double survival_probability(const FanoParams& p, double t) {
  return std::norm(survival_amplitude(poles(p), t));
}

/// P(T) = 1 - |U_gg(T)|^2.
inline double ionization_probability(const FanoParams& p, double t) {
  return 1.0 - survival_probability(p, t);
}

/// dP/dt = -2 Re(conj(U) dU/dt), evaluated from the pole expansion.
inline double ionization_rate(const FanoParams& p, double t) {
  const PoleData d = poles(p);
  const cplx u = survival_amplitude(d, t);
  cplx du;
  if (d.confluent) {
    const cplx ph = std::exp(-I * d.z1 * t);
    du = d.confluent_c * ph - I * d.z1 * (1.0 + d.confluent_c * t) * ph;
  } else {
    du = -I * (d.a1 * d.z1 * std::exp(-I * d.z1 * t) + d.a2 * d.z2 * std::exp(-I * d.z2 * t));
  }
  return -2.0 * std::real(std::conj(u) * du);
}

/// Weak-field fragmentation rate 2 W^2 (eps + q)^2 / (1 + eps^2).
/// Meaningful only when W^2 (1 + q^2) << 1.
inline double weak_field_rate(double epsilon, double q, double Omega) {
  const double num = epsilon + q;
  return 2.0 * Omega * Omega * num * num / (1.0 + epsilon * epsilon);
}

/// Detected ions for a beam of constant flux crossing an interaction
/// region of duration T.
inline double ionized_count(double flux, const FanoParams& p, double T) {
  return flux * ionization_probability(p, T);
}

/// Linear-in-T variant, flux * T * dP/dt|_{0+}: the Fano-exact approximation.
inline double ionized_count_fano_exact(double flux, const FanoParams& p, double T) {
  return flux * T * weak_field_rate(p.epsilon, p.q, p.Omega);
}

struct IonizationTable {
  std::vector<double> epsilon;
  std::vector<double> times;
  std::vector<double> probability;  // [t * epsilon.size() + e]
  std::vector<double> rate;         // dP/dt at the same points

  double P(std::size_t t, std::size_t e) const { return probability[t * epsilon.size() + e]; }
  double dPdt(std::size_t t, std::size_t e) const { return rate[t * epsilon.size() + e]; }
};

/// P(T) and dP/dt over an (eps, T) grid; epsilon in `tmpl` is overridden.
inline IonizationTable ionization_sweep(const FanoParams& tmpl, std::span<const double> eps,
                                        std::span<const double> times) {
  IonizationTable out;
  out.epsilon.assign(eps.begin(), eps.end());
  out.times.assign(times.begin(), times.end());
  out.probability.resize(eps.size() * times.size());
  out.rate.resize(eps.size() * times.size());
  parallel_for(eps.size(), [&](std::size_t e) {
    FanoParams p = tmpl;
    p.epsilon = eps[e];
    const PoleData d = poles(p);
    for (std::size_t t = 0; t < times.size(); ++t) {
      const double u2 = std::norm(survival_amplitude(d, times[t]));
      out.probability[t * eps.size() + e] = std::clamp(1.0 - u2, 0.0, 1.0);
      out.rate[t * eps.size() + e] = ionization_rate(p, times[t]);
    }
  });
  return out;
}

/// max/min of P(T) over the epsilon grid at time index t.
inline double profile_flatness(const IonizationTable& tab, std::size_t t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t e = 0; e < tab.epsilon.size(); ++e) {
    lo = std::min(lo, tab.P(t, e));
    hi = std::max(hi, tab.P(t, e));
  }
  return hi / lo;
}

}  // namespace fano

#endif  // FANO_SCATTERING_HPP
