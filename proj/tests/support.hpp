// Copyright 2026 The posform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Random generators and small oracles shared by the tests. Oracles work
// on plain complex matrices and never go through the storage coordinates.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "posform/linalg.hpp"

namespace posform::testing {

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(std::mt19937_64& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline CMatrix random_complex(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(gaussian(rng), gaussian(rng));
  }
  return m;
}

inline CVector random_vector(std::size_t d, std::mt19937_64& rng) {
  CVector v = random_complex(d, 1, rng).col(0);
  return v / v.norm();
}

inline CMatrix random_hermitian(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  const CMatrix g = random_complex(d, d, rng);
  return scale * (g + g.adjoint()) / 2.0;
}

// Haar-like unitary: Gram-Schmidt on a complex Gaussian matrix.
inline CMatrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  CMatrix q = random_complex(d, d, rng);
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    q.col(j).normalize();
  }
  return q;
}

// Random density matrix of random rank.
inline CMatrix random_density(std::size_t d, std::mt19937_64& rng) {
  const std::size_t rank = 1 + static_cast<std::size_t>(rng() % d);
  const CMatrix g = random_complex(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// Kraus operators K_i = rows-block i of the first d columns of a random
// unitary of size count*d, so that sum K_i^dagger K_i = I.
inline std::vector<CMatrix> random_kraus(std::size_t d, std::size_t count, std::mt19937_64& rng) {
  const CMatrix u = random_unitary(d * count, rng);
  std::vector<CMatrix> ops;
  for (std::size_t i = 0; i < count; ++i) {
    ops.push_back(u.block(static_cast<Eigen::Index>(i * d), 0, static_cast<Eigen::Index>(d),
                          static_cast<Eigen::Index>(d)));
  }
  return ops;
}

inline CMatrix apply_ops(const std::vector<CMatrix>& ops, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(b.rows(), b.cols());
  for (const auto& k : ops) out += k * b * k.adjoint();
  return out;
}

inline CMatrix ket_bra(const CVector& v) { return v * v.adjoint(); }

inline CVector basis_vector(std::size_t d, std::size_t i) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

inline CVector plus_state() { return CVector::Constant(2, cplx(1.0 / std::sqrt(2.0), 0.0)); }

inline CVector minus_state() {
  CVector v(2);
  v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  return v;
}

inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

inline CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline CMatrix diag(std::initializer_list<double> values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  CMatrix m = CMatrix::Zero(n, n);
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

inline double distance(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Eigenvalues of a 2x2 Hermitian matrix from trace and determinant.
inline std::pair<double, double> eig2(const CMatrix& m) {
  const double t = (m(0, 0) + m(1, 1)).real();
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, t * t / 4.0 - det));
  return {t / 2.0 - disc, t / 2.0 + disc};
}

}  // namespace posform::testing
