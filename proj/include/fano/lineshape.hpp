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

#ifndef FANO_LINESHAPE_HPP
#define FANO_LINESHAPE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fano/types.hpp"

namespace fano {

/// Beutler-Fano profile (eps + q)^2 / (eps^2 + 1).
inline double fano_profile(double epsilon, double q) {
  const double num = epsilon + q;
  return num * num / (epsilon * epsilon + 1.0);
}

/// |eps + qbar|^2 / (eps^2 + 1): a Fano profile plus a Lorentzian of
/// weight q_i^2.
inline double fano_complex_q(double eps_eff, const ComplexQ& qbar) {
  return std::norm(cplx(eps_eff, 0.0) + qbar.value()) / (eps_eff * eps_eff + 1.0);
}

/// (a0 + a1 e + a2 e^2) / (b0 + b1 e + b2 e^2)
struct RationalQuadratic {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
  double b0 = 1.0, b1 = 0.0, b2 = 1.0;

  double numerator(double e) const { return a0 + e * (a1 + e * a2); }
  double denominator(double e) const { return b0 + e * (b1 + e * b2); }
  double operator()(double e) const { return numerator(e) / denominator(e); }

  double discriminant() const { return b1 * b1 - 4.0 * b0 * b2; }
  bool valid() const { return b2 != 0.0 && discriminant() < 0.0; }
};

/// Fano-plus-Lorentzian form of a RationalQuadratic:
///   value = c2 * ((e' + q)^2 + D) / (K_den * (e'^2 + 1)),  e' = (e + Delta) / sigma.
/// The c-coefficients are the numerator expanded in e'.
struct LineshapeDecomposition {
  double Delta = 0.0;
  double sigma = 1.0;
  double K_den = 1.0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double q = std::numeric_limits<double>::quiet_NaN();
  double D = std::numeric_limits<double>::quiet_NaN();
  bool pure_lorentzian = false;  // a2 == 0: no Fano term, q undefined

  double eps_eff(double e) const { return (e + Delta) / sigma; }

  double operator()(double e) const {
    const double x = eps_eff(e);
    if (pure_lorentzian) return (c0 + c1 * x) / (K_den * (x * x + 1.0));
    return c2 * ((x + q) * (x + q) + D) / (K_den * (x * x + 1.0));
  }

  /// q_i = sqrt(D) when D >= 0.
  std::optional<ComplexQ> complex_q() const {
    if (pure_lorentzian || D < 0.0) return std::nullopt;
    return ComplexQ{q, std::sqrt(D)};
  }
};

/// Shift-and-rescale a ratio of quadratics into Fano-plus-Lorentzian form.
///
/// The constant numerator coefficient is c0 = a0 - a1*Delta + a2*Delta^2,
/// the complete expansion of the numerator at e = sigma*e' - Delta.
inline LineshapeDecomposition decompose(const RationalQuadratic& rq) {
  if (rq.b2 == 0.0) throw FitError("decompose: b2 must be nonzero");
  if (!(rq.discriminant() < 0.0)) {
    throw FitError("decompose: denominator has real roots (b1^2 - 4 b0 b2 >= 0)");
  }
  LineshapeDecomposition d;
  d.Delta = rq.b1 / (2.0 * rq.b2);
  d.sigma = std::sqrt(rq.b0 / rq.b2 - rq.b1 * rq.b1 / (4.0 * rq.b2 * rq.b2));
  d.K_den = rq.b0 - rq.b1 * rq.b1 / (4.0 * rq.b2);
  d.c2 = rq.a2 * d.sigma * d.sigma;
  d.c1 = rq.a1 * d.sigma - 2.0 * rq.a2 * d.sigma * d.Delta;
  d.c0 = rq.a0 - rq.a1 * d.Delta + rq.a2 * d.Delta * d.Delta;
  if (rq.a2 == 0.0) {
    d.pure_lorentzian = true;
    return d;
  }
  d.q = d.c1 / (2.0 * d.c2);
  d.D = d.c0 / d.c2 - d.c1 * d.c1 / (4.0 * d.c2 * d.c2);
  return d;
}

struct RationalFit {
  RationalQuadratic rq;
  /// max |fit(e_i) - y_i| / max |y_i| over the fitted samples.
  double residual = 0.0;
  double condition_number = 0.0;
};

/// Linearized least squares for a ratio of quadratics with b2 = 1.
/// Solves a0 + a1 e + a2 e^2 - y (b0 + b1 e) = y e^2 on scaled
/// variables, so exact members of the model class are recovered exactly.
inline RationalFit fit_rational_quadratic(std::span<const double> eps, std::span<const double> values) {
  if (eps.size() != values.size()) throw FitError("fit: epsilon and value counts differ");
  std::vector<double> sorted(eps.begin(), eps.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 6) {
    throw FitError("fit: at least 6 distinct epsilon values are required");
  }
  double es = 0.0;
  double ys = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!std::isfinite(eps[i]) || !std::isfinite(values[i])) throw FitError("fit: non-finite sample");
    es = std::max(es, std::abs(eps[i]));
    ys = std::max(ys, std::abs(values[i]));
  }
  if (es == 0.0) es = 1.0;
  if (ys == 0.0) ys = 1.0;

  const auto n = static_cast<Eigen::Index>(eps.size());
  Eigen::MatrixXd a(n, 5);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = eps[i] / es;
    const double y = values[i] / ys;
    a.row(i) << 1.0, t, t * t, -y, -y * t;
    rhs(i) = y * t * t;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond < 1e13)) {
    throw FitError("fit: singular normal equations, condition number " + std::to_string(cond));
  }
  const Eigen::VectorXd x = svd.solve(rhs);

  RationalFit fit;
  fit.condition_number = cond;
  // Undo t = e / es and y -> y / ys.
  fit.rq.a0 = x(0) * es * es * ys;
  fit.rq.a1 = x(1) * es * ys;
  fit.rq.a2 = x(2) * ys;
  fit.rq.b0 = x(3) * es * es;
  fit.rq.b1 = x(4) * es;
  fit.rq.b2 = 1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    worst = std::max(worst, std::abs(fit.rq(eps[i]) - values[i]));
  }
  fit.residual = worst / ys;
  return fit;
}

}  // namespace fano

#endif  // FANO_LINESHAPE_HPP
