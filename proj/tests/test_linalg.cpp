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

#include <doctest.h>

#include <cmath>
#include <random>

#include "posform/linalg.hpp"
#include "support.hpp"

using namespace posform;
using namespace posform::testing;

TEST_CASE("kron of small matrices") {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  Matrix b = Matrix::Identity(2, 2);
  const Matrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 0) == 1);
  CHECK(k(1, 1) == 1);
  CHECK(k(0, 2) == 2);
  CHECK(k(3, 1) == 3);
  CHECK(k(2, 3) == 0);
  Vector u(2), v(3);
  u << 1, 2;
  v << 1, 10, 100;
  const Vector w = kron(u, v);
  CHECK(w.size() == 6);
  CHECK(w(4) == 20);
}

TEST_CASE("eigh reconstructs random Hermitian matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 4);
    const CMatrix h = random_hermitian(d, rng);
    const HermitianEigen e = eigh(h);
    const CMatrix back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    CHECK(distance(back, h) < 1e-12);
    for (Eigen::Index i = 1; i < e.values.size(); ++i) CHECK(e.values(i - 1) <= e.values(i));
    CHECK(min_eigenvalue(h) == doctest::Approx(e.values(0)));
    CHECK(max_eigenvalue(h) == doctest::Approx(e.values(e.values.size() - 1)));
  }
}

TEST_CASE("exp(-i t X) matches cos/sin form") {
  for (double t : {0.0, 0.3, 1.0, -2.5}) {
    const CMatrix u = unitary_from_hamiltonian(pauli_x(), t);
    const CMatrix expected =
        std::cos(t) * CMatrix::Identity(2, 2) - cplx(0, 1) * std::sin(t) * pauli_x();
    CHECK(distance(u, expected) < 1e-14);
  }
}

TEST_CASE("apply_on_factor agrees with the Kronecker embedding") {
  std::mt19937_64 rng(5);
  const std::vector<std::size_t> dims{2, 3, 2};
  Vector v(12);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform(rng, -1, 1);
  Matrix op(3, 3);
  for (Eigen::Index i = 0; i < 9; ++i) op(i / 3, i % 3) = uniform(rng, -1, 1);
  const Matrix full = kron(kron(Matrix::Identity(2, 2), op), Matrix::Identity(2, 2));
  CHECK((apply_on_factor(v, dims, 1, op) - full * v).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("matrix units and products") {
  const CMatrix e = matrix_unit(3, 1, 2);
  CHECK(e(1, 2) == cplx(1, 0));
  CHECK(e.cwiseAbs().sum() == 1.0);
  CHECK(product({2, 3, 4}) == 24);
  CHECK(is_hermitian(pauli_y(), 1e-15));
  CHECK_FALSE(is_hermitian(e, 1e-15));
}
