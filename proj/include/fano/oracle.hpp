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

#ifndef FANO_ORACLE_HPP
#define FANO_ORACLE_HPP

// Brute-force reference: every continuum becomes M_k discrete states on a
// uniform grid, and the steady state of the resulting finite Lindblad
// generator is solved without any projection or wideband step.
//
// The generator is assembled sparse. Its continuum-continuum block is
// diagonal (continuum states only talk to each other through discrete
// levels), so that block is eliminated exactly by a Schur complement and
// the remaining N^2 + 2 N sum(M_k) unknowns are solved densely.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fano/general_model.hpp"
#include "fano/parallel.hpp"
#include "fano/types.hpp"

namespace fano {

using SparseC = Eigen::SparseMatrix<cplx>;

struct DiscretizationSpec {
  double bandwidth = 200.0;          // W
  int levels_per_continuum = 201;    // M_k
  std::optional<double> center;      // lab-frame band centre; default: mean one-photon level energy
  double grid_shift = 0.0;           // offset of the grid in units of dE
  std::size_t max_liouville_dim = 250000;  // cap on (N + sum M_k)^2

  double spacing() const { return bandwidth / (levels_per_continuum - 1); }
};

/// Bytes for a dense complex generator of Hilbert dimension d.
inline double dense_generator_bytes(std::size_t d) {
  const double l = static_cast<double>(d) * static_cast<double>(d);
  return l * l * 16.0;
}

/// Bytes for the dense reduced system actually factorized.
inline double reduced_system_bytes(std::size_t n, std::size_t k) {
  const double r = static_cast<double>(n * n + 2 * n * k);
  return r * r * 16.0;
}

struct FullLindbladian {
  SparseC L;                      // row-major vectorization over n + k states
  std::size_t n_discrete = 0;
  std::size_t dim = 0;            // Hilbert dimension n + k
  std::vector<std::size_t> offset;  // first state of each continuum
  std::vector<int> levels_per_continuum;
  std::vector<double> relaxation;  // sum_b Gamma_b per continuum
  std::vector<double> energies;    // rotating-frame energies of all states
};

namespace detail {

inline double default_center(const GeneralModel& m) {
  double s = 0.0;
  int count = 0;
  for (const Level& l : m.levels) {
    if (l.photon_index == 1) {
      s += l.energy;
      ++count;
    }
  }
  if (count == 0) {
    for (const Level& l : m.levels) s += l.energy;
    count = static_cast<int>(m.levels.size());
  }
  return s / count;
}

inline std::string gib(double bytes) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g GiB", bytes / (1024.0 * 1024.0 * 1024.0));
  return buf;
}

}  // namespace detail

inline FullLindbladian build_full_lindbladian(const GeneralModel& model, const DiscretizationSpec& spec,
                                              double omega_L) {
  // Structural checks only: a generator without continuum relaxation is
  // still a valid (purely coherent) object; its steady state is not.
  if (auto v = structural_violations(model); !v.empty()) throw ModelError("invalid model: " + join(v));
  if (spec.levels_per_continuum < 3) throw ModelError("oracle: levels_per_continuum must be >= 3");
  if (!(spec.bandwidth > 0.0) || !std::isfinite(spec.bandwidth)) throw ModelError("oracle: bandwidth must be > 0");
  const std::size_t n = model.size();
  const std::size_t mk = static_cast<std::size_t>(spec.levels_per_continuum);
  const std::size_t k = mk * model.continua.size();
  const std::size_t d = n + k;
  if (d * d > spec.max_liouville_dim) {
    throw ModelError("oracle: Liouville dimension " + std::to_string(d * d) + " exceeds cap " +
                     std::to_string(spec.max_liouville_dim) + "; the reduced solve needs about " +
                     detail::gib(reduced_system_bytes(n, k)) + " (a dense generator would need " +
                     detail::gib(dense_generator_bytes(d)) + ")");
  }

  FullLindbladian f;
  f.n_discrete = n;
  f.dim = d;
  const double de = spec.spacing();
  const double center = spec.center.value_or(detail::default_center(model)) - omega_L;

  // Hamiltonian as a list of entries.
  struct Entry {
    std::size_t r, c;
    cplx v;
  };
  std::vector<Entry> h;
  const MatrixXc h0 = rotating_frame_h0(model, omega_L);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx v = h0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0) h.push_back({i, j, v});
    }
  f.energies.resize(d);
  for (std::size_t i = 0; i < n; ++i) f.energies[i] = h0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();

  struct Channel {
    std::size_t from, to;
    double rate;
  };
  std::vector<Channel> jumps;
  for (const Jump& j : model.jumps)
    if (j.rate > 0.0) jumps.push_back({j.from, j.to, j.rate});

  std::size_t next = n;
  for (const Continuum& c : model.continua) {
    f.offset.push_back(next);
    f.levels_per_continuum.push_back(spec.levels_per_continuum);
    f.relaxation.push_back(c.total_relaxation());
    const double scale = std::sqrt(de * c.density);
    for (std::size_t s = 0; s < mk; ++s) {
      const std::size_t q = next + s;
      const double e = center + (static_cast<double>(s) - 0.5 * static_cast<double>(mk - 1) + spec.grid_shift) * de;
      f.energies[q] = e;
      h.push_back({q, q, e});
      for (std::size_t i = 0; i < n; ++i) {
        const double v = c.couplings[i] * scale;
        if (v == 0.0) continue;
        h.push_back({i, q, v});
        h.push_back({q, i, v});
      }
      for (std::size_t b = 0; b < n; ++b)
        if (c.relax_rates[b] > 0.0) jumps.push_back({q, b, c.relax_rates[b]});
    }
    next += mk;
  }

  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(2 * h.size() * d + 3 * jumps.size() * d);
  auto at = [d](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(i * d + j); };
  // -i [H, rho]
  for (const Entry& e : h) {
    for (std::size_t j = 0; j < d; ++j) t.emplace_back(at(e.r, j), at(e.c, j), -I * e.v);
    for (std::size_t i = 0; i < d; ++i) t.emplace_back(at(i, e.c), at(i, e.r), I * e.v);
  }
  // rate (|t><f| rho |f><t| - {|f><f|, rho}/2)
  for (const Channel& c : jumps) {
    t.emplace_back(at(c.to, c.to), at(c.from, c.from), c.rate);
    for (std::size_t j = 0; j < d; ++j) t.emplace_back(at(c.from, j), at(c.from, j), -0.5 * c.rate);
    for (std::size_t i = 0; i < d; ++i) t.emplace_back(at(i, c.from), at(i, c.from), -0.5 * c.rate);
  }
  for (const Dephasing& p : model.dephasings) {
    t.emplace_back(at(p.i, p.j), at(p.i, p.j), -p.rate);
    t.emplace_back(at(p.j, p.i), at(p.j, p.i), -p.rate);
  }
  f.L.resize(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
  f.L.setFromTriplets(t.begin(), t.end());
  f.L.makeCompressed();
  return f;
}

inline MatrixXc to_dense(const FullLindbladian& f) { return MatrixXc(f.L); }

struct OracleResult {
  MatrixXc rho;            // full (n + k) x (n + k) density matrix
  DensityMatrixP reduced;  // discrete block plus per-continuum populations
  double residual = 0.0;   // |L rho| / (|L|_F |rho|)
  double min_eigenvalue = 0.0;
  bool psd_ok = true;      // min eigenvalue >= -1e-9
  double rcond = 0.0;
};

inline OracleResult oracle_steady_state(const FullLindbladian& f) {
  const std::size_t n = f.n_discrete;
  const std::size_t d = f.dim;
  const auto total = static_cast<Eigen::Index>(d * d);

  // Split unknowns into r (at least one discrete index) and c (both continuum).
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(total));
  std::vector<bool> is_c(static_cast<std::size_t>(total));
  Eigen::Index nr = 0;
  Eigen::Index nc = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t p = i * d + j;
      is_c[p] = i >= n && j >= n;
      slot[p] = is_c[p] ? nc++ : nr++;
    }

  std::vector<Eigen::Triplet<cplx>> trr, trc, tcr;
  Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(nc);
  for (Eigen::Index col = 0; col < f.L.outerSize(); ++col) {
    for (SparseC::InnerIterator it(f.L, col); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      const auto c = static_cast<std::size_t>(it.col());
      const Eigen::Index sr = slot[r];
      const Eigen::Index sc = slot[c];
      if (!is_c[r] && !is_c[c]) {
        trr.emplace_back(sr, sc, it.value());
      } else if (!is_c[r]) {
        trc.emplace_back(sr, sc, it.value());
      } else if (!is_c[c]) {
        tcr.emplace_back(sr, sc, it.value());
      } else if (r == c) {
        diag(sr) += it.value();
      } else {
        throw SolverError("oracle: continuum-continuum block is not diagonal");
      }
    }
  }
  for (Eigen::Index i = 0; i < nc; ++i) {
    if (std::abs(diag(i)) == 0.0) throw SolverError("oracle: continuum state without relaxation");
  }
  SparseC lrr(nr, nr), lrc(nr, nc), lcr(nc, nr);
  lrr.setFromTriplets(trr.begin(), trr.end());
  lrc.setFromTriplets(trc.begin(), trc.end());
  lcr.setFromTriplets(tcr.begin(), tcr.end());
  const Eigen::VectorXcd dinv = diag.cwiseInverse();
  const SparseC elim = dinv.asDiagonal() * lcr;  // x_c = -elim * x_r
  const SparseC schur = lrr - lrc * elim;

  MatrixXc s = MatrixXc(schur);
  // Trace constraint replaces the ground-population row.
  Eigen::RowVectorXcd trace = Eigen::RowVectorXcd::Zero(nr);
  for (std::size_t i = 0; i < n; ++i) trace(slot[i * d + i]) += 1.0;
  for (std::size_t i = n; i < d; ++i) trace -= elim.row(slot[i * d + i]);
  const Eigen::Index ground = slot[0];
  s.row(ground) = trace;
  VectorXc rhs = VectorXc::Zero(nr);
  rhs(ground) = 1.0;

  Eigen::PartialPivLU<MatrixXc> lu(s);
  OracleResult out;
  out.rcond = lu.rcond();
  if (!(out.rcond > 1e-14)) {
    throw SolverError("oracle: degenerate kernel (reciprocal condition " + std::to_string(out.rcond) + ")");
  }
  const VectorXc xr = lu.solve(rhs);
  const VectorXc xc = -(elim * xr);

  VectorXc v(total);
  for (Eigen::Index p = 0; p < total; ++p) v(p) = is_c[static_cast<std::size_t>(p)] ? xc(slot[static_cast<std::size_t>(p)]) : xr(slot[static_cast<std::size_t>(p)]);
  out.residual = (f.L * v).norm() / (f.L.norm() * v.norm());

  out.rho = unvectorize(v, static_cast<Eigen::Index>(d));
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(out.rho, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.psd_ok = out.min_eigenvalue >= -1e-9;

  const auto ni = static_cast<Eigen::Index>(n);
  out.reduced.rho = out.rho.topLeftCorner(ni, ni);
  for (std::size_t a = 0; a < f.offset.size(); ++a) {
    double pop = 0.0;
    for (int s2 = 0; s2 < f.levels_per_continuum[a]; ++s2) {
      const auto q = static_cast<Eigen::Index>(f.offset[a] + static_cast<std::size_t>(s2));
      pop += out.rho(q, q).real();
    }
    out.reduced.continuum_pops.push_back(pop);
  }
  return out;
}

inline OracleResult oracle_solve(const GeneralModel& model, const DiscretizationSpec& spec, double omega_L) {
  return oracle_steady_state(build_full_lindbladian(model, spec, omega_L));
}

/// sum_a Gamma^(a) P_a / rho_00 on the discretized model.
inline double oracle_transport_rate(const FullLindbladian& f, const OracleResult& r) {
  const double gg = r.reduced.population(0);
  if (!(gg > 1e-300)) throw SolverError("oracle_transport_rate: rho_00 = 0");
  double flux = 0.0;
  for (std::size_t a = 0; a < f.relaxation.size(); ++a) flux += f.relaxation[a] * r.reduced.continuum_pops[a];
  return flux / gg;
}

struct ConvergenceRow {
  double bandwidth = 0.0;
  int levels = 0;
  double spacing = 0.0;
  double population = 0.0;           // oracle, summed over continua
  double population_analytic = 0.0;
  double rate = 0.0;                 // oracle transport rate
  double rate_analytic = 0.0;
  double population_error = 0.0;     // relative
  double rate_error = 0.0;           // relative
  double residual = 0.0;
  double min_eigenvalue = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  /// Slope p of log(error) against log(W) with error ~ W^-p.
  double fitted_order = 0.0;
  /// Every rung no worse than 1.1 x the previous one.
  bool converging = true;
};

/// Analytic (wideband) continuum population against the oracle along a
/// ladder of discretizations, rungs solved in parallel.
inline ConvergenceStudy convergence_study(const GeneralModel& model, double omega_L,
                                          const std::vector<DiscretizationSpec>& ladder) {
  if (ladder.size() < 3) throw ModelError("convergence_study: at least 3 rungs required");
  const GeneralEffectiveLiouvillian gel = build_general(model, omega_L);
  const DensityMatrixP exact = general_steady_state(gel);
  const double pop_exact = exact.continuum_total();
  const double rate_exact = transport_rate(gel, exact);

  ConvergenceStudy st;
  st.rows.resize(ladder.size());
  parallel_for(ladder.size(), [&](std::size_t i) {
    const FullLindbladian f = build_full_lindbladian(model, ladder[i], omega_L);
    const OracleResult r = oracle_steady_state(f);
    ConvergenceRow& row = st.rows[i];
    row.bandwidth = ladder[i].bandwidth;
    row.levels = ladder[i].levels_per_continuum;
    row.spacing = ladder[i].spacing();
    row.population = r.reduced.continuum_total();
    row.population_analytic = pop_exact;
    row.rate = oracle_transport_rate(f, r);
    row.rate_analytic = rate_exact;
    row.population_error = std::abs(row.population - pop_exact) / std::abs(pop_exact);
    row.rate_error = std::abs(row.rate - rate_exact) / std::abs(rate_exact);
    row.residual = r.residual;
    row.min_eigenvalue = r.min_eigenvalue;
  });

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < st.rows.size(); ++i) {
    const double x = std::log(st.rows[i].bandwidth);
    const double y = std::log(std::max(st.rows[i].population_error, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    if (i > 0 && st.rows[i].population_error > 1.1 * st.rows[i - 1].population_error) st.converging = false;
  }
  const double m = static_cast<double>(st.rows.size());
  const double den = m * sxx - sx * sx;
  st.fitted_order = den != 0.0 ? -(m * sxy - sx * sy) / den : 0.0;
  return st;
}

/// The rungs (50, 51), (100, 101), (200, 201): dE fixed at 1, band grows.
inline std::vector<DiscretizationSpec> default_ladder() {
  std::vector<DiscretizationSpec> out(3);
  out[0].bandwidth = 50.0;
  out[0].levels_per_continuum = 51;
  out[1].bandwidth = 100.0;
  out[1].levels_per_continuum = 101;
  out[2].bandwidth = 200.0;
  out[2].levels_per_continuum = 201;
  return out;
}

}  // namespace fano

#endif  // FANO_ORACLE_HPP
