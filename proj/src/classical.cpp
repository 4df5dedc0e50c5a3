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

#include "posform/classical.hpp"

#include <utility>

#include "posform/errors.hpp"

namespace posform {

namespace {

void require_classical(const Element& b, const char* op) {
  if (b.space()->cone_kind() != ConeKind::componentwise) {
    throw DomainError(std::string(op) + ": not a classical space");
  }
}

}  // namespace

SpacePtr make_classical_space(const PhaseSpace& ps, std::string id) {
  const std::size_t n = ps.n();
  if (n == 0) throw DimensionError("make_classical_space: empty phase space");
  Vector mu(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!(ps.mu[i] > 0.0)) {
      throw DomainError("make_classical_space: measure entry " + std::to_string(i + 1) +
                        " is not strictly positive");
    }
    mu(static_cast<Eigen::Index>(i)) = ps.mu[i];
  }
  if (id.empty()) id = "classical" + std::to_string(n);
  return ModelSpace::create(std::move(id), {{FactorKind::classical, n}}, Matrix(mu.asDiagonal()),
                            Vector::Ones(static_cast<Eigen::Index>(n)));
}

MeasurementSpec indicator_measurement(const SpacePtr& space, const std::vector<std::size_t>& subset,
                                      std::string name) {
  if (space->cone_kind() != ConeKind::componentwise) {
    throw DomainError("indicator_measurement: not a classical space");
  }
  const auto n = static_cast<Eigen::Index>(space->dim());
  Vector chi = Vector::Zero(n);
  for (std::size_t i : subset) {
    if (i >= space->dim()) {
      throw DomainError("indicator_measurement: point index " + std::to_string(i + 1) +
                        " is out of range");
    }
    chi(static_cast<Eigen::Index>(i)) = 1.0;
  }
  const Vector complement = Vector::Ones(n) - chi;
  return {std::move(name),
          {{"in", OperationMap(space, Matrix(chi.asDiagonal()), Selectivity::selective, Provenance::indicator)},
           {"out", OperationMap(space, Matrix(complement.asDiagonal()), Selectivity::selective,
                                Provenance::indicator)}},
          OperationMap(space, Matrix::Identity(n, n), Selectivity::nonselective, Provenance::indicator)};
}

EvolutionGroup permutation_evolution(const SpacePtr& space, std::vector<std::size_t> images) {
  return EvolutionGroup::permutation(space, std::move(images));
}

Element meet(const Element& b, const Element& c) {
  require_same_space(b, c, "meet");
  require_classical(b, "meet");
  return {b.space(), b.coords().cwiseMin(c.coords())};
}

Element join(const Element& b, const Element& c) {
  require_same_space(b, c, "join");
  require_classical(b, "join");
  return {b.space(), b.coords().cwiseMax(c.coords())};
}

}  // namespace posform
