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

// Probes as linear functionals on tensor products of boundary spaces.
//
// A probe carries an ordered list of boundary factors. Each factor is a
// labelled slot (a time slice, say) holding a ModelSpace; two probes
// compose along a label they share. Coefficients are dual coordinates in
// the product storage basis, so pair(P, x) = coeffs^T (G_1 ⊗ ... ⊗ G_n) x.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posform/linalg.hpp"
#include "posform/operational.hpp"
#include "posform/ordered_space.hpp"

namespace posform {

struct BoundaryFactor {
  std::string label;
  SpacePtr space;
};

class ProbeFunctional {
 public:
  /// Throws DimensionError when the coefficient count differs from the
  /// product of factor dimensions, or a label is repeated.
  ProbeFunctional(std::vector<BoundaryFactor> boundary, Vector coeffs);

  const std::vector<BoundaryFactor>& boundary() const { return boundary_; }
  const Vector& coeffs() const { return coeffs_; }
  std::vector<std::size_t> dims() const;
  std::vector<SpacePtr> spaces() const;
  /// Identifier of the product space the probe pairs with.
  std::string boundary_id() const { return product_id(spaces()); }

  /// Index of the factor with this label, if present.
  std::optional<std::size_t> find(const std::string& label) const;

  ProbeFunctional operator+(const ProbeFunctional& other) const;
  ProbeFunctional operator-(const ProbeFunctional& other) const;
  ProbeFunctional operator*(double s) const;

 private:
  std::vector<BoundaryFactor> boundary_;
  Vector coeffs_;
};

/// Same labels and spaces, in the same order.
bool same_boundary(const ProbeFunctional& a, const ProbeFunctional& b);

ProbeFunctional zero_probe(std::vector<BoundaryFactor> boundary);

/// Riesz vector of the probe: the metric applied factor by factor, so that
/// pair(P, x) = evaluation_vector(P) . x.
Vector evaluation_vector(const ProbeFunctional& p);

/// The pairing [[P, x]]. `x` must live in the product of P's boundary spaces.
double pair(const ProbeFunctional& p, const Element& x);

/// [[P_A, x]] / [[P_star, x]]. Throws IncompatibleError when the reference
/// compatibility is <= tol, DomainError when the ratio leaves [-tol, 1+tol]
/// (P_A is then not dominated by P_star at x).
double outcome_probability(const ProbeFunctional& p_a, const ProbeFunctional& p_star,
                           const Element& x, double tol = kDefaultTol);

/// ||sum_i outcomes_i - p_star||_inf <= tol on coefficients. Throws
/// DimensionError on a boundary mismatch.
bool completeness_check(const std::vector<ProbeFunctional>& outcomes,
                        const ProbeFunctional& p_star, double tol = 1e-10);

/// Composition along the shared slot `label`:
///   [[P ◇ Q, b ⊗ c]] = sum_k [[P, b ⊗ ξ_k]] [[Q, c ⊗ ξ_k]]
/// over an orthonormal basis {ξ_k} of the shared space. The result boundary
/// is P's remaining factors followed by Q's. `shared_basis`, when given,
/// holds the ξ_k as columns and must be orthonormal for the shared metric;
/// by default the storage basis is orthonormalized through the Cholesky
/// factor of the metric (the storage basis itself when the metric is the
/// identity). Throws DimensionError when the label is absent in either
/// probe, names different spaces, or the result would repeat a label.
ProbeFunctional compose(const ProbeFunctional& p, const ProbeFunctional& q,
                        const std::string& label,
                        const std::optional<Matrix>& shared_basis = std::nullopt);

/// The map M with [[P, b1 ⊗ b2]] = <b2, M b1>. P must have exactly two
/// factors over the same space (initial, final). The result is flagged
/// non-selective when it satisfies the causality normalization.
OperationMap probe_to_map(const ProbeFunctional& p);

/// Inverse of probe_to_map, with boundary (in_label, out_label).
ProbeFunctional map_to_probe(const OperationMap& m, const std::string& in_label = "in",
                             const std::string& out_label = "out");

/// Probe that lets signals pass: [[T, b1 ⊗ b2]] = <b2, b1>.
ProbeFunctional transparent_probe(const SpacePtr& space, const std::string& in_label = "in",
                                  const std::string& out_label = "out");

/// Sampled properness: pair(P, x) >= -tol * scale for `samples` random
/// tensor products x of cone elements of the factors.
bool is_proper(const ProbeFunctional& p, std::size_t samples = 1000, std::uint64_t seed = 0,
               double tol = kDefaultTol);

}  // namespace posform
