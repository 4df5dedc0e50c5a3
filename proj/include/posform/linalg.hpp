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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace posform {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;

Matrix kron(const Matrix& a, const Matrix& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
Vector kron(const Vector& a, const Vector& b);

/// Largest absolute entry (the max-norm used for tolerances).
double max_abs(const Matrix& m);
double max_abs(const CMatrix& m);
double max_abs(const Vector& v);

bool is_hermitian(const CMatrix& m, double tol);

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
struct HermitianEigen {
  Vector values;
  CMatrix vectors;
};

/// Eigendecomposition of the Hermitian part of `m`.
HermitianEigen eigh(const CMatrix& m);

double min_eigenvalue(const CMatrix& hermitian);
double max_eigenvalue(const CMatrix& hermitian);

/// exp(-i t H) for Hermitian H, through the eigendecomposition.
CMatrix unitary_from_hamiltonian(const CMatrix& hamiltonian, double t);

/// Matrix unit E_ij of size d.
CMatrix matrix_unit(std::size_t d, std::size_t i, std::size_t j);

/// Product of a list of factor sizes.
std::size_t product(const std::vector<std::size_t>& sizes);

/// Applies `op` (n x n) to tensor factor `pos` of a vector laid out in
/// row-major Kronecker order over `dims` (factor 0 most significant).
Vector apply_on_factor(const Vector& v, const std::vector<std::size_t>& dims, std::size_t pos,
                       const Matrix& op);

}  // namespace posform
