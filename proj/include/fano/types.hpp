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

#ifndef FANO_TYPES_HPP
#define FANO_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fano {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double pi = std::numbers::pi;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input does not describe a valid model.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// The generator has no (unique) normalizable steady state.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit or lineshape decomposition could not be formed.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Dimensionless single-resonance parameters. Energies and rates are in
/// units of the continuum width hbar*gamma = n*pi*V^2, times in 1/gamma.
///
/// Gamma_e follows the amplitude convention of the two-level effective
/// Liouvillian: the excited population relaxes at 2*Gamma_e and the g-e
/// coherence at Gamma_e. Gamma_cg and Gamma_ce are population relaxation
/// rates of every continuum state into g and e respectively.
struct FanoParams {
  double epsilon = 0.0;   // (omega_L - E_e) / hbar*gamma
  double q = 0.0;         // mu_e / (n*pi*mu_c)
  double Omega = 0.0;     // mu_c*F / 2V
  double Gamma_e = 0.0;
  double Gamma_cg = 1.0;
  double Gamma_ce = 0.0;
  double gamma_eg = 0.0;
  // Continuum-discrete dephasings. They drop out under the wideband
  // approximation; kept so callers can state them and see them ignored.
  double gamma_kg = 0.0;
  double gamma_ke = 0.0;

  double Gamma_c() const { return Gamma_cg + Gamma_ce; }

  /// Branching ratio of continuum relaxation into the ground state.
  double beta() const {
    if (!(Gamma_c() > 0.0)) {
      throw ModelError("beta is undefined: Gamma_cg + Gamma_ce must be positive");
    }
    return Gamma_cg / Gamma_c();
  }
};

inline std::vector<std::string> validate(const FanoParams& p) {
  std::vector<std::string> out;
  auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) out.push_back(std::string(name) + " is not finite");
  };
  finite(p.epsilon, "epsilon");
  finite(p.q, "q");
  auto nonneg = [&](double v, const char* name) {
    if (!std::isfinite(v)) {
      out.push_back(std::string(name) + " is not finite");
    } else if (v < 0.0) {
      out.push_back(std::string(name) + " must be >= 0");
    }
  };
  nonneg(p.Omega, "Omega");
  nonneg(p.Gamma_e, "Gamma_e");
  nonneg(p.Gamma_cg, "Gamma_cg");
  nonneg(p.Gamma_ce, "Gamma_ce");
  nonneg(p.gamma_eg, "gamma_eg");
  nonneg(p.gamma_kg, "gamma_kg");
  nonneg(p.gamma_ke, "gamma_ke");
  return out;
}

/// Inputs that are accepted but cannot change any wideband result.
inline std::vector<std::string> ignored_inputs(const FanoParams& p) {
  std::vector<std::string> out;
  if (p.gamma_kg != 0.0) out.emplace_back("gamma_kg ignored: continuum-ground dephasing drops out in the wideband limit");
  if (p.gamma_ke != 0.0) out.emplace_back("gamma_ke ignored: continuum-excited dephasing drops out in the wideband limit");
  return out;
}

/// Complex asymmetry parameter q + i*q_i.
struct ComplexQ {
  double q = 0.0;
  double q_i = 0.0;

  cplx value() const { return {q, q_i}; }
  double abs2() const { return q * q + q_i * q_i; }
};

struct Level {
  double energy = 0.0;
  int photon_index = 0;  // 0: ground manifold, 1: one photon absorbed
};

struct Continuum {
  double density = 1.0 / pi;          // n = dk/dE
  std::vector<double> couplings;      // V_i, one per discrete level
  std::vector<double> relax_rates;    // Gamma_b, continuum -> level b
  std::vector<double> pump_rates;     // level b -> continuum; rejected

  double total_relaxation() const {
    double s = 0.0;
    for (double g : relax_rates) s += g;
    return s;
  }
};

/// Lindblad jump |to><from| with population rate `rate`.
struct Jump {
  std::size_t from = 0;
  std::size_t to = 0;
  double rate = 0.0;
};

/// Extra damping of the coherences rho_ij and rho_ji.
struct Dephasing {
  std::size_t i = 0;
  std::size_t j = 0;
  double rate = 0.0;
};

/// Declares which coupling defines the unit width gamma_ref = n*pi*V^2.
struct ReferenceWidth {
  std::size_t continuum = 0;
  std::size_t level = 0;
};

/// N discrete levels coupled to M wideband continua.
struct GeneralModel {
  std::vector<Level> levels;
  MatrixXc dipoles;  // N x N, Hermitian, zero diagonal
  std::vector<Continuum> continua;
  std::vector<Jump> jumps;
  std::vector<Dephasing> dephasings;
  ReferenceWidth reference;

  std::size_t size() const { return levels.size(); }

  double reference_width() const {
    const Continuum& c = continua.at(reference.continuum);
    const double v = c.couplings.at(reference.level);
    return c.density * pi * v * v;
  }
};

/// Violations that make a model unusable for any construction.
inline std::vector<std::string> structural_violations(const GeneralModel& m) {
  std::vector<std::string> out;
  const std::size_t n = m.size();
  if (n < 1) out.emplace_back("levels: at least one discrete level required");
  if (m.continua.empty()) out.emplace_back("continua: at least one continuum required");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(m.levels[i].energy)) {
      out.push_back("level " + std::to_string(i) + ": energy is not finite");
    }
    if (m.levels[i].photon_index < 0) {
      out.push_back("level " + std::to_string(i) + ": photon_index must be >= 0");
    }
  }
  if (static_cast<std::size_t>(m.dipoles.rows()) != n ||
      static_cast<std::size_t>(m.dipoles.cols()) != n) {
    out.emplace_back("dipoles: matrix must be N x N");
  } else {
    bool herm = true;
    bool diag = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(m.dipoles(i, i)) != 0.0) diag = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(m.dipoles(i, j) - std::conj(m.dipoles(j, i))) > 1e-12) herm = false;
      }
    }
    if (!herm) out.emplace_back("dipole matrix not Hermitian");
    if (!diag) out.emplace_back("dipole matrix diagonal must be zero (energies belong to levels)");
  }
  for (std::size_t a = 0; a < m.continua.size(); ++a) {
    const Continuum& c = m.continua[a];
    const std::string tag = "continuum " + std::to_string(a) + ": ";
    if (!(c.density > 0.0) || !std::isfinite(c.density)) out.push_back(tag + "density must be > 0");
    if (c.couplings.size() != n) out.push_back(tag + "couplings must have one entry per level");
    if (c.relax_rates.size() != n) out.push_back(tag + "relax_rates must have one entry per level");
    for (double v : c.couplings) {
      if (!std::isfinite(v)) out.push_back(tag + "coupling is not finite");
    }
    for (double g : c.relax_rates) {
      if (!(g >= 0.0) || !std::isfinite(g)) out.push_back(tag + "relax_rates must be finite and >= 0");
    }
    for (double g : c.pump_rates) {
      if (g != 0.0) {
        out.push_back(tag + "incoherent pumping into a continuum diverges in the wideband approximation");
        break;
      }
    }
  }
  for (const Jump& j : m.jumps) {
    if (j.from >= n || j.to >= n) out.emplace_back("dissipators: jump index out of range");
    if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) out.emplace_back("dissipators: jump rate must be >= 0");
  }
  for (const Dephasing& d : m.dephasings) {
    if (d.i >= n || d.j >= n || d.i == d.j) out.emplace_back("dissipators: dephasing pair invalid");
    if (!(d.rate >= 0.0) || !std::isfinite(d.rate)) out.emplace_back("dissipators: dephasing rate must be >= 0");
  }
  if (!m.continua.empty() && (m.reference.continuum >= m.continua.size() || m.reference.level >= n)) {
    out.emplace_back("units: reference width index out of range");
  }
  return out;
}

/// All invariants, including the ones a unique steady state needs.
/// Empty iff the model is valid.
inline std::vector<std::string> validate_model(const GeneralModel& m) {
  std::vector<std::string> out = structural_violations(m);
  for (std::size_t a = 0; a < m.continua.size(); ++a) {
    const Continuum& c = m.continua[a];
    if (c.relax_rates.size() == m.size() && !(c.total_relaxation() > 0.0)) {
      out.push_back("continuum " + std::to_string(a) + ": total relaxation rate is zero");
    }
  }
  return out;
}

inline std::string join(const std::vector<std::string>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) os << "; ";
    os << items[i];
  }
  return os.str();
}

inline void require_valid(const GeneralModel& m) {
  auto v = validate_model(m);
  if (!v.empty()) throw ModelError("invalid model: " + join(v));
}

/// Steady state restricted to the discrete levels, plus the population
/// held by each continuum.
struct DensityMatrixP {
  MatrixXc rho;
  std::vector<double> continuum_pops;

  double continuum_total() const {
    double s = 0.0;
    for (double p : continuum_pops) s += p;
    return s;
  }
  double total() const { return rho.trace().real() + continuum_total(); }
  double population(std::size_t i) const { return rho(i, i).real(); }
};

inline std::vector<std::string> check_density(const DensityMatrixP& d, double tol = 1e-10) {
  std::vector<std::string> out;
  const auto n = d.rho.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(d.rho(i, i).imag()) > tol) out.emplace_back("diagonal entry not real");
    if (d.rho(i, i).real() < -tol) out.emplace_back("negative population");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(d.rho(i, j) - std::conj(d.rho(j, i))) > tol) {
        out.emplace_back("rho not Hermitian");
        i = n;
        break;
      }
    }
  }
  for (double p : d.continuum_pops) {
    if (p < -tol) out.emplace_back("negative continuum population");
  }
  if (std::abs(d.total() - 1.0) > tol) out.emplace_back("trace plus continuum populations differs from 1");
  return out;
}

}  // namespace fano

#endif  // FANO_TYPES_HPP
