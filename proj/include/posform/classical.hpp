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

// Classical model: functions on a finite phase space with a strictly
// positive measure, the L2 inner product and the constant unit function.

#include <cstddef>
#include <string>
#include <vector>

#include "posform/operational.hpp"
#include "posform/ordered_space.hpp"

namespace posform {

struct PhaseSpace {
  std::vector<double> mu;  // measure of each point, all > 0

  std::size_t n() const { return mu.size(); }
};

/// dim = n, metric = diag(mu), componentwise cone, unit = all ones.
/// Throws DomainError for a non-positive measure entry. An empty id becomes
/// "classical<n>".
SpacePtr make_classical_space(const PhaseSpace& ps, std::string id = "");

/// Yes/no measurement of membership in `subset` (0-based point indices):
/// outcome "in" multiplies by the indicator of the subset, outcome "out" by
/// the indicator of its complement, and the parent is the identity.
MeasurementSpec indicator_measurement(const SpacePtr& space, const std::vector<std::size_t>& subset,
                                      std::string name = "indicator");

/// Evolution group generated by the bijection i -> images[i], which must
/// preserve the measure.
EvolutionGroup permutation_evolution(const SpacePtr& space, std::vector<std::size_t> images);

/// Pointwise minimum / maximum.
Element meet(const Element& b, const Element& c);
Element join(const Element& b, const Element& c);

}  // namespace posform
