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
#include <numbers>
#include <random>

#include "posform/classical.hpp"
#include "posform/errors.hpp"
#include "posform/operational.hpp"
#include "posform/quantum.hpp"
#include "support.hpp"

using namespace posform;
using namespace posform::testing;

namespace {

const SpacePtr& qubit() {
  static const SpacePtr q = make_quantum_space(2);
  return q;
}

Element state(const CMatrix& m) { return from_matrix(qubit(), m); }

CMatrix p0() { return ket_bra(basis_vector(2, 0)); }
CMatrix p1() { return ket_bra(basis_vector(2, 1)); }

OperationMap project(const CMatrix& p) { return kraus_map(qubit(), KrausSet({p})); }
OperationMap dephase() { return kraus_map(qubit(), KrausSet({p0(), p1()})); }

MeasurementSpec z_basis() { return projective_measurement(qubit(), {p0(), p1()}, {"0", "1"}, "Z"); }
MeasurementSpec x_basis() {
  return projective_measurement(qubit(), {ket_bra(plus_state()), ket_bra(minus_state())}, {"+", "-"}, "X");
}

}  // namespace

TEST_CASE("is_nonselective") {
  CHECK(is_nonselective(identity_map(qubit())));
  CHECK_FALSE(is_nonselective(project(p0())));
  // trace preservation of the dephasing map on the four basis matrices
  const OperationMap d = dephase();
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const CMatrix e = matrix_unit(2, i, j);
      CHECK(std::abs((p0() * e * p0() + p1() * e * p1()).trace() - e.trace()) < 1e-15);
    }
  }
  CHECK(is_nonselective(d));
}

TEST_CASE("conditioned_probability") {
  const Element e = unit_element(qubit());
  CHECK(conditioned_probability(state(p0()), e, dephase(), dephase()) == doctest::Approx(1));
  CHECK(conditioned_probability(state(p0()), e, project(p0()), dephase()) == doctest::Approx(1));
  // tr(|1><1| P0 |+><+| P0) = 0
  const CMatrix plus = ket_bra(plus_state());
  CHECK(std::abs((p1() * p0() * plus * p0()).trace()) < 1e-15);
  CHECK(std::abs(conditioned_probability(state(plus), state(p1()), project(p0()), dephase())) < 1e-15);
  CHECK_THROWS_AS(conditioned_probability(state(p0()), state(p1()), project(p0()), project(p0())),
                  IncompatibleError);
}

TEST_CASE("predict") {
  const Element mixed = state(CMatrix::Identity(2, 2) / 2.0);
  CHECK(predict(mixed, z_basis(), "0") == doctest::Approx(0.5));
  CHECK(predict(state(ket_bra(plus_state())), z_basis(), "0") == doctest::Approx(0.5));
  const SpacePtr c3 = make_classical_space(PhaseSpace{{1, 1, 1}});
  const Element uniform3(c3, Vector::Constant(3, 1.0 / 3));
  CHECK(predict(uniform3, indicator_measurement(c3, {0, 1}), "in") == doctest::Approx(2.0 / 3));
  CHECK_THROWS_AS(predict(unit_element(qubit()), z_basis(), "0"), DomainError);
  CHECK_THROWS_AS(predict(mixed, z_basis(), "2"), DomainError);
}

TEST_CASE("update_state") {
  const SpacePtr c3 = make_classical_space(PhaseSpace{{1, 1, 1}});
  const Element uniform3(c3, Vector::Constant(3, 1.0 / 3));
  const Element u = update_state(uniform3, indicator_measurement(c3, {0, 1}).outcome("in"));
  CHECK(u.coords()(0) == doctest::Approx(0.5));
  CHECK(u.coords()(1) == doctest::Approx(0.5));
  CHECK(u.coords()(2) == doctest::Approx(0.0));
  const Element once = update_state(state(ket_bra(plus_state())), project(p0()));
  CHECK(distance(matrix_form(once), p0()) < 1e-15);
  const Element twice = update_state(once, project(p0()));
  CHECK((twice.coords() - once.coords()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(update_state(state(p1()), project(p0())), ConditioningError);
}

TEST_CASE("run_sequence") {
  const Element b = state(p0());
  const SequenceResult empty = run_sequence(b, {});
  CHECK(empty.probability == 1.0);
  CHECK((empty.final_state.coords() - b.coords()).cwiseAbs().maxCoeff() == 0.0);

  // two-step trace oracle: tr(P+ P0 b P0 P+)
  const CMatrix pp = ket_bra(plus_state());
  const double oracle = (pp * p0() * p0() * p0() * p0() * pp).trace().real();
  std::vector<SequenceStep> steps{MeasureStep{z_basis(), "0"}, MeasureStep{x_basis(), "+"}};
  const SequenceResult r = run_sequence(b, steps);
  CHECK(r.probability == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(r.probability == doctest::Approx(0.5));
  CHECK(distance(matrix_form(r.final_state), pp) < 1e-12);
  REQUIRE(r.per_step.size() == 2);
  CHECK(r.per_step[0].conditional_probability * r.per_step[1].conditional_probability ==
        doctest::Approx(r.probability));

  steps.push_back(MeasureStep{z_basis(), std::nullopt});
  const SequenceResult r2 = run_sequence(b, steps);
  CHECK(std::abs(r2.probability - r.probability) < 1e-12);
  CHECK(r2.per_step.back().outcome == "unobserved");

  std::vector<SequenceStep> impossible{MeasureStep{z_basis(), "1"}};
  try {
    run_sequence(b, impossible);
    FAIL("expected ConditioningError");
  } catch (const ConditioningError& e) {
    CHECK(std::string(e.what()).find("step 1 (Z)") != std::string::npos);
  }
}

TEST_CASE("run_sequence with post-selection") {
  // <b2, S_A b> / <b2, S_* b> by explicit traces
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix rho = random_density(2, rng);
    const CMatrix post = random_density(2, rng);
    const CMatrix pp = ket_bra(plus_state());
    const CMatrix pm = ket_bra(minus_state());
    const CMatrix num = pp * (p0() * rho * p0()) * pp;
    const CMatrix a = p0() * rho * p0() + p1() * rho * p1();
    const CMatrix den = pp * a * pp + pm * a * pm;
    const double oracle = (post * num).trace().real() / (post * den).trace().real();
    std::vector<SequenceStep> steps{MeasureStep{z_basis(), "0"}, MeasureStep{x_basis(), "+"}};
    const SequenceResult r = run_sequence(state(rho), steps, state(post));
    CHECK(r.probability == doctest::Approx(oracle).epsilon(1e-10));
    double product = 1.0;
    for (const auto& s : r.per_step) product *= s.conditional_probability;
    CHECK(product == doctest::Approx(r.probability).epsilon(1e-10));
  }
}

TEST_CASE("evolution") {
  const Element plus = state(ket_bra(plus_state()));
  const EvolutionGroup gz = hamiltonian_evolution(qubit(), pauli_z());
  CHECK((evolve(gz, 0.0, plus).coords() - plus.coords()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((evolve(gz, std::numbers::pi, plus).coords() - plus.coords()).cwiseAbs().maxCoeff() < 1e-12);
  // diagonalized phase oracle: exp(-i pi/2 Z)|+> = (-i|0> + i|1>)/sqrt2
  CVector psi(2);
  psi << cplx(0, -1) / std::sqrt(2.0), cplx(0, 1) / std::sqrt(2.0);
  CHECK(distance(matrix_form(evolve(gz, std::numbers::pi / 2, plus)), ket_bra(psi)) < 1e-12);
  CHECK(distance(ket_bra(psi), ket_bra(minus_state())) < 1e-15);
  CHECK_THROWS_AS(EvolutionGroup::hamiltonian(qubit(), matrix_unit(2, 0, 1)), DomainError);
}

TEST_CASE("property: evolution composes and preserves structure") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    const SpacePtr s = make_quantum_space(d);
    const EvolutionGroup g = hamiltonian_evolution(s, random_hermitian(d, rng));
    const double t1 = uniform(rng, -2, 2), t2 = uniform(rng, -2, 2);
    const Element b = sample_cone_element(s, rng);
    const Element c = sample_cone_element(s, rng);
    const Element lhs = evolve(g, t1, evolve(g, t2, b));
    CHECK((lhs.coords() - evolve(g, t1 + t2, b).coords()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(inner(evolve(g, t1, b), evolve(g, t1, c)) == doctest::Approx(inner(b, c)).epsilon(1e-9));
    const Element e = unit_element(s);
    CHECK((evolve(g, t1, e).coords() - e.coords()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(is_nonselective(g.map(t1)));
  }
  const SpacePtr c4 = make_classical_space(PhaseSpace{{1, 2, 1, 2}});
  const EvolutionGroup perm = permutation_evolution(c4, {2, 3, 0, 1});
  for (int trial = 0; trial < 20; ++trial) {
    const Element b = sample_cone_element(c4, rng);
    const int k1 = static_cast<int>(rng() % 7) - 3, k2 = static_cast<int>(rng() % 7) - 3;
    const Element lhs = evolve(perm, k1, evolve(perm, k2, b));
    CHECK((lhs.coords() - evolve(perm, k1 + k2, b).coords()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(evolve(perm, k1, unit_element(c4)).coords() == unit_element(c4).coords());
  }
  CHECK_THROWS_AS(perm.map(0.5), DomainError);
}

TEST_CASE("property: causality of non-selective and selective operations") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    const SpacePtr s = make_quantum_space(d);
    const auto ops = random_kraus(d, 3, rng);
    const OperationMap parent = kraus_map(s, KrausSet(ops));
    REQUIRE(is_nonselective(parent));
    const Element e = unit_element(s);
    for (int i = 0; i < 20; ++i) {
      const Element c = sample_cone_element(s, rng);
      CHECK(std::abs(inner(e, parent(c)) - inner(e, c)) <= 1e-10);
      for (const auto& k : ops) {
        const OperationMap m = kraus_map(s, KrausSet({k}));
        CHECK(inner(e, m(c)) <= inner(e, c) + 1e-10);
      }
    }
  }
}

TEST_CASE("property: predictions sum to one") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    const SpacePtr s = make_quantum_space(d);
    const auto spec = spectral_measurement(s, random_hermitian(d, rng)).spec;
    const Element b = normalize_state(sample_cone_element(s, rng));
    double total = 0.0;
    for (const auto& label : spec.labels()) total += predict(b, spec, label);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("adjoint with respect to the metric") {
  std::mt19937_64 rng(59);
  const SpacePtr c3 = make_classical_space(PhaseSpace{{0.5, 2, 3}});
  Matrix m(3, 3);
  for (Eigen::Index i = 0; i < 9; ++i) m(i / 3, i % 3) = uniform(rng);
  const OperationMap op(c3, m);
  for (int i = 0; i < 10; ++i) {
    const Element b = sample_cone_element(c3, rng), c = sample_cone_element(c3, rng);
    CHECK(inner(c, op(b)) == doctest::Approx(inner(op.apply_adjoint(c), b)).epsilon(1e-12));
  }
}
