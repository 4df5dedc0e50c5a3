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

#include "posform/classical.hpp"
#include "posform/errors.hpp"
#include "posform/probes.hpp"
#include "posform/quantum.hpp"
#include "support.hpp"

using namespace posform;
using namespace posform::testing;

namespace {

const SpacePtr& qubit() {
  static const SpacePtr q = make_quantum_space(2);
  return q;
}

Element q(const CMatrix& m) { return from_matrix(qubit(), m); }

CMatrix p0() { return ket_bra(basis_vector(2, 0)); }
CMatrix p1() { return ket_bra(basis_vector(2, 1)); }

OperationMap kraus(const SpacePtr& s, std::vector<CMatrix> ops) { return kraus_map(s, KrausSet(std::move(ops))); }

double max_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Random orthogonal matrix by Gram-Schmidt on a Gaussian matrix.
Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = gaussian(rng);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index k = 0; k < j; ++k) m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
    m.col(j).normalize();
  }
  return m;
}

}  // namespace

TEST_CASE("pairing") {
  const SpacePtr qq = product_space(qubit(), qubit());
  const ProbeFunctional zero = zero_probe({{"in", qubit()}, {"out", qubit()}});
  std::mt19937_64 rng(1);
  CHECK(pair(zero, sample_cone_element(qq, rng)) == 0.0);
  const ProbeFunctional t = transparent_probe(qubit());
  CHECK(pair(t, tensor_element(q(p0()), q(p0()))) == doctest::Approx(1));
  CHECK(std::abs(pair(t, tensor_element(q(p0()), q(p1())))) < 1e-15);
  CHECK(pair(t, tensor_element(q(CMatrix::Identity(2, 2) / 2.0), q(CMatrix::Identity(2, 2) / 2.0))) ==
        doctest::Approx(0.5));
  const SpacePtr c3 = make_classical_space(PhaseSpace{{1, 1, 1}});
  const Element ones(c3, Vector::Ones(3));
  CHECK(pair(transparent_probe(c3), tensor_element(ones, ones)) == doctest::Approx(3));
  CHECK_THROWS_AS(pair(t, q(p0())), DimensionError);
}

TEST_CASE("outcome_probability") {
  const ProbeFunctional star = map_to_probe(kraus(qubit(), {p0(), p1()}));
  const ProbeFunctional a = map_to_probe(kraus(qubit(), {p0()}));
  const Element x = tensor_element(q(ket_bra(plus_state())), unit_element(qubit()));
  CHECK(outcome_probability(star, star, x) == doctest::Approx(1));
  CHECK(outcome_probability(star * 0.0, star, x) == 0.0);
  const CMatrix plus = ket_bra(plus_state());
  const double oracle = (p0() * plus * p0()).trace().real() / (p0() * plus * p0() + p1() * plus * p1()).trace().real();
  CHECK(outcome_probability(a, star, x) == doctest::Approx(oracle));
  CHECK(oracle == doctest::Approx(0.5));
  const Element blocked = tensor_element(q(p1()), q(p0()));
  CHECK_THROWS_AS(outcome_probability(a, map_to_probe(kraus(qubit(), {p0()})), blocked), IncompatibleError);
}

TEST_CASE("completeness_check") {
  const ProbeFunctional a0 = map_to_probe(kraus(qubit(), {p0()}));
  const ProbeFunctional a1 = map_to_probe(kraus(qubit(), {p1()}));
  const ProbeFunctional star = map_to_probe(kraus(qubit(), {p0(), p1()}));
  CHECK(completeness_check({star}, star));
  CHECK(completeness_check({a0, a1}, star));
  CHECK_FALSE(completeness_check({star, star}, star));
}

TEST_CASE("composition") {
  std::mt19937_64 rng(7);
  const ProbeFunctional t01 = transparent_probe(qubit(), "t0", "t1");
  const ProbeFunctional t12 = transparent_probe(qubit(), "t1", "t2");
  const ProbeFunctional tt = compose(t01, t12, "t1");
  CHECK(tt.boundary().size() == 2);
  CHECK(tt.boundary()[0].label == "t0");
  CHECK(tt.boundary()[1].label == "t2");
  CHECK(max_diff(tt.coeffs(), transparent_probe(qubit(), "t0", "t2").coeffs()) < 1e-14);

  const ProbeFunctional z = zero_probe({{"t1", qubit()}, {"t2", qubit()}});
  CHECK(compose(t01, z, "t1").coeffs().cwiseAbs().maxCoeff() == 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    const OperationMap m = kraus(qubit(), random_kraus(2, 2, rng));
    const OperationMap n = kraus(qubit(), random_kraus(2, 3, rng));
    const OperationMap composed = probe_to_map(compose(map_to_probe(m, "t0", "t1"), map_to_probe(n, "t1", "t2"), "t1"));
    // direct oracle: N(M(b)) on matrices
    const CMatrix b = random_density(2, rng);
    const CMatrix direct = apply_complexified(n, apply_complexified(m, b));
    CHECK(distance(matrix_form(composed(q(b))), direct) < 1e-9);
    CHECK((composed.matrix() - then(m, n).matrix()).cwiseAbs().maxCoeff() < 1e-9);
  }
  CHECK_THROWS_AS(compose(t01, t12, "t9"), DimensionError);
  CHECK_THROWS_AS(compose(t01, t01, "t1"), DimensionError);
}

TEST_CASE("probe/map conversions") {
  const OperationMap id = probe_to_map(transparent_probe(qubit()));
  CHECK((id.matrix() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(id.selectivity() == Selectivity::nonselective);

  // tr(|-><-| Z |+><+| Z) = 1
  const ProbeFunctional pz = map_to_probe(kraus(qubit(), {pauli_z()}));
  const CMatrix plus = ket_bra(plus_state()), minus = ket_bra(minus_state());
  CHECK((minus * pauli_z() * plus * pauli_z()).trace().real() == doctest::Approx(1));
  CHECK(pair(pz, tensor_element(q(plus), q(minus))) == doctest::Approx(1));

  std::mt19937_64 rng(9);
  const SpacePtr c3 = make_classical_space(PhaseSpace{{0.5, 1, 2}});
  for (const SpacePtr& s : {qubit(), make_quantum_space(3), c3}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<BoundaryFactor> boundary{{"in", s}, {"out", s}};
      Vector coeffs(static_cast<Eigen::Index>(s->dim() * s->dim()));
      for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) = uniform(rng, -1, 1);
      const ProbeFunctional p(boundary, coeffs);
      const OperationMap m = probe_to_map(p);
      CHECK(max_diff(map_to_probe(m).coeffs(), coeffs) < 1e-12);
      // defining property [[P, b1 ⊗ b2]] = <b2, M b1>
      const Element b1 = sample_cone_element(s, rng), b2 = sample_cone_element(s, rng);
      CHECK(pair(p, tensor_element(b1, b2)) == doctest::Approx(inner(b2, m(b1))).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: composition is basis independent") {
  std::mt19937_64 rng(13);
  for (std::size_t d : {2, 3}) {
    const SpacePtr s = make_quantum_space(d);
    for (int trial = 0; trial < 20; ++trial) {
      const ProbeFunctional p = map_to_probe(kraus(s, random_kraus(d, 2, rng)), "a", "b");
      const ProbeFunctional r = map_to_probe(kraus(s, random_kraus(d, 2, rng)), "b", "c");
      const Matrix rotated = random_orthogonal(s->dim(), rng);
      CHECK(max_diff(compose(p, r, "b").coeffs(), compose(p, r, "b", rotated).coeffs()) < 1e-9);
    }
  }
  // non-identity metric: xi = G^{-1/2} Q
  const SpacePtr c3 = make_classical_space(PhaseSpace{{0.5, 1, 4}});
  Matrix inv_sqrt = Matrix::Zero(3, 3);
  inv_sqrt.diagonal() << 1 / std::sqrt(0.5), 1, 0.5;
  for (int trial = 0; trial < 20; ++trial) {
    Vector a(9), b(9);
    for (Eigen::Index i = 0; i < 9; ++i) a(i) = uniform(rng, -1, 1), b(i) = uniform(rng, -1, 1);
    const ProbeFunctional p({{"a", c3}, {"b", c3}}, a);
    const ProbeFunctional r({{"b", c3}, {"c", c3}}, b);
    const Matrix basis = inv_sqrt * random_orthogonal(3, rng);
    CHECK(max_diff(compose(p, r, "b").coeffs(), compose(p, r, "b", basis).coeffs()) < 1e-9);
  }
  CHECK_THROWS_AS(compose(transparent_probe(c3, "a", "b"), transparent_probe(c3, "b", "c"), "b",
                          Matrix(Matrix::Identity(3, 3) * 2.0)),
                  DomainError);
}

TEST_CASE("property: composing with the transparent probe reproduces P") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const ProbeFunctional p = map_to_probe(kraus(qubit(), random_kraus(2, 2, rng)), "a", "b");
    CHECK(max_diff(compose(p, transparent_probe(qubit(), "b", "c"), "b").coeffs(), p.coeffs()) < 1e-12);
    CHECK(max_diff(compose(transparent_probe(qubit(), "z", "a"), p, "a").coeffs(), p.coeffs()) < 1e-12);
  }
}

TEST_CASE("property: dominated outcome probabilities stay below one") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ops = random_kraus(2, 2, rng);
    const ProbeFunctional star = map_to_probe(kraus(qubit(), ops));
    const ProbeFunctional a = map_to_probe(kraus(qubit(), {ops[0]}));
    REQUIRE(is_proper(star - a, 200, static_cast<std::uint64_t>(trial)));
    for (int i = 0; i < 100; ++i) {
      const Element x = tensor_element(sample_cone_element(qubit(), rng), sample_cone_element(qubit(), rng));
      const double den = pair(star, x);
      if (den > 1e-9) CHECK(pair(a, x) / den <= 1 + 1e-9);
    }
  }
}

TEST_CASE("property: maps of proper probes are positive") {
  std::mt19937_64 rng(27);
  for (std::size_t d : {2, 3}) {
    const SpacePtr s = make_quantum_space(d);
    const ProbeFunctional p = map_to_probe(kraus(s, random_kraus(d, 2, rng)));
    REQUIRE(is_proper(p));
    const OperationMap m = probe_to_map(p);
    for (int i = 0; i < 1000; ++i) CHECK(is_positive(m(sample_cone_element(s, rng)), 1e-9));
  }
  Vector negative = -map_to_probe(identity_map(qubit())).coeffs();
  CHECK_FALSE(is_proper(ProbeFunctional({{"in", qubit()}, {"out", qubit()}}, negative)));
}
