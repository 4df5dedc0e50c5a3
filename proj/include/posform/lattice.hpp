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

// Order-theoretic comparison of states: four-way classification, and
// witness-based evidence that the qubit state space is an anti-lattice.

#include <cstddef>
#include <optional>
#include <variant>

#include "posform/linalg.hpp"
#include "posform/ordered_space.hpp"

namespace posform {

enum class Verdict { less, greater, equal, incomparable };

const char* to_string(Verdict v);

struct OrderRelation {
  Verdict verdict;
  /// c - b for `less`, b - c for `greater` (a positive certificate);
  /// empty otherwise.
  std::optional<Element> witness;
};

/// Classifies b against c from leq in both directions. Elements within
/// tol * max(|b|, |c|) of each other (max-norm) are `equal`.
OrderRelation classify_order(const Element& b, const Element& c, double tol = kDefaultTol);

struct AntiLatticeOptions {
  double resolution = 0.05;      // grid step, relative to max(|A|, |B|)
  double certificate_tol = 1e-10;
};

/// Re-verifiable evidence that {A, B} has no greatest lower bound.
struct AntiLatticeWitness {
  CMatrix c1;
  CMatrix c2;
  /// A - C1, B - C1, A - C2, B - C2 all PSD and C1, C2 incomparable.
  bool certificates_hold;
  /// Grid points that are common lower bounds of {A, B}.
  std::size_t grid_lower_bounds;
  /// A grid common lower bound dominating both C1 and C2, if one was found.
  std::optional<CMatrix> dominating_bound;
};

/// A and B are comparable, so a minimum trivially exists.
struct ComparableReport {
  Verdict verdict;
};

using AntiLatticeResult = std::variant<AntiLatticeWitness, ComparableReport>;

/// Common-lower-bound check: A - C and B - C PSD at `tol` (relative).
bool is_common_lower_bound(const CMatrix& a, const CMatrix& b, const CMatrix& c, double tol);

/// Runs every certificate on a candidate witness pair.
bool verify_witness(const CMatrix& a, const CMatrix& b, const CMatrix& c1, const CMatrix& c2,
                    double tol);

/// Searches for two incomparable common lower bounds of PSD 2x2 matrices A
/// and B.
///
/// With D = A - B = a^2 v+ v+^† - c^2 v- v-^† (A, B incomparable makes D
/// indefinite), every hyperbolic rotation
///   x(τ) = a cosh τ v+ + c sinh τ v-
/// gives a maximal common lower bound C(τ) = A - x(τ) x(τ)^†, since then
/// B - C(τ) = y(τ) y(τ)^† with y(τ) = a sinh τ v+ + c cosh τ v- independent
/// of x(τ). C1 = C(0) and C2 = C(1) are emitted when their certificates
/// hold; otherwise the pair is taken from the grid. The grid (real
/// symmetric matrices, entries in [-1, 1] * max(|A|, |B|)) is then searched
/// for a common lower bound dominating both. Throws UnsupportedError for
/// d != 2 and DomainError for non-PSD input.
AntiLatticeResult anti_lattice_witness(const CMatrix& a, const CMatrix& b,
                                       const AntiLatticeOptions& options = {});

}  // namespace posform
