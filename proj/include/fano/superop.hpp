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

#ifndef FANO_SUPEROP_HPP
#define FANO_SUPEROP_HPP

// Liouville-space helpers.
//
// Density matrices are vectorized row-major: rho_ij sits at index i*N + j,
// i.e. |ij>> = |i> (x) |j> with i the ket index. For two levels (g=0, e=1)
// the order is {gg, ge, eg, ee}. Under this convention
//   A rho B  ->  (A (x) B^T) vec(rho).

#include <cstddef>

#include "fano/types.hpp"

namespace fano {

inline std::size_t vec_index(std::size_t i, std::size_t j, std::size_t n) { return i * n + j; }

inline VectorXc vectorize(const MatrixXc& rho) {
  const auto n = rho.rows();
  VectorXc v(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = rho(i, j);
  return v;
}

inline MatrixXc unvectorize(const VectorXc& v, Eigen::Index n) {
  MatrixXc rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) rho(i, j) = v(i * n + j);
  return rho;
}

inline MatrixXc kron(const MatrixXc& a, const MatrixXc& b) {
  MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// rho -> A rho
inline MatrixXc left_multiply(const MatrixXc& a) {
  return kron(a, MatrixXc::Identity(a.rows(), a.rows()));
}

/// rho -> rho B
inline MatrixXc right_multiply(const MatrixXc& b) {
  return kron(MatrixXc::Identity(b.rows(), b.rows()), b.transpose());
}

/// rho -> -i (H rho - rho H^dagger). Valid for non-Hermitian H.
inline MatrixXc hamiltonian_superop(const MatrixXc& h) {
  return -I * (left_multiply(h) - right_multiply(h.adjoint()));
}

/// rate * (D rho D^dagger - {D^dagger D, rho} / 2)
inline MatrixXc lindblad_superop(const MatrixXc& d, double rate) {
  const MatrixXc dd = d.adjoint() * d;
  return rate * (kron(d, d.conjugate()) - 0.5 * left_multiply(dd) - 0.5 * right_multiply(dd));
}

/// Pure dephasing: rho_ij and rho_ji decay at `rate`.
inline MatrixXc dephasing_superop(std::size_t n, std::size_t i, std::size_t j, double rate) {
  MatrixXc out = MatrixXc::Zero(n * n, n * n);
  out(vec_index(i, j, n), vec_index(i, j, n)) = -rate;
  out(vec_index(j, i, n), vec_index(j, i, n)) = -rate;
  return out;
}

/// Real coordinates of Hermitian matrices: diagonal entries, then
/// (Re, Im) of rho_ij for i < j in row-major order.
class HermitianCoordinates {
 public:
  explicit HermitianCoordinates(std::size_t n) : n_(n) {}

  std::size_t size() const { return n_ * n_; }

  MatrixXc basis(std::size_t p) const {
    MatrixXc b = MatrixXc::Zero(n_, n_);
    if (p < n_) {
      b(p, p) = 1.0;
      return b;
    }
    std::size_t k = (p - n_) / 2;
    const bool imag = (p - n_) % 2 == 1;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (k-- == 0) {
          b(i, j) = imag ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
          b(j, i) = std::conj(b(i, j));
          return b;
        }
      }
    }
    return b;
  }

  Eigen::VectorXd coordinates(const MatrixXc& rho) const {
    Eigen::VectorXd x(size());
    std::size_t p = 0;
    for (std::size_t i = 0; i < n_; ++i) x(p++) = rho(i, i).real();
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        x(p++) = rho(i, j).real();
        x(p++) = rho(i, j).imag();
      }
    }
    return x;
  }

  MatrixXc matrix(const Eigen::VectorXd& x) const {
    MatrixXc rho = MatrixXc::Zero(n_, n_);
    std::size_t p = 0;
    for (std::size_t i = 0; i < n_; ++i) rho(i, i) = x(p++);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        rho(i, j) = cplx(x(p), x(p + 1));
        rho(j, i) = std::conj(rho(i, j));
        p += 2;
      }
    }
    return rho;
  }

  /// Real matrix of a Hermiticity-preserving superoperator.
  Eigen::MatrixXd real_generator(const MatrixXc& l) const {
    Eigen::MatrixXd g(size(), size());
    for (std::size_t p = 0; p < size(); ++p) {
      const VectorXc image = l * vectorize(basis(p));
      g.col(static_cast<Eigen::Index>(p)) = coordinates(unvectorize(image, static_cast<Eigen::Index>(n_)));
    }
    return g;
  }

 private:
  std::size_t n_;
};

}  // namespace fano

#endif  // FANO_SUPEROP_HPP
