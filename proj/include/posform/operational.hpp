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

// Convex operational layer: operations as cone-preserving linear maps,
// causality normalization, predictions, state update and time-translation
// invariant evolution groups.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "posform/linalg.hpp"
#include "posform/ordered_space.hpp"

namespace posform {

enum class Selectivity { selective, nonselective };
enum class Provenance { generic, kraus, permutation, indicator, unitary, evolution };

const char* to_string(Selectivity s);
const char* to_string(Provenance p);

/// A linear map B -> B acting on storage coordinates.
class OperationMap {
 public:
  OperationMap(SpacePtr space, Matrix matrix, Selectivity selectivity = Selectivity::selective,
               Provenance provenance = Provenance::generic);

  const SpacePtr& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  Selectivity selectivity() const { return selectivity_; }
  Provenance provenance() const { return provenance_; }

  Element apply(const Element& b) const;
  Element operator()(const Element& b) const { return apply(b); }

  /// Adjoint with respect to the metric: <c, M b> = <M^+ c, b>.
  Element apply_adjoint(const Element& c) const;

 private:
  SpacePtr space_;
  Matrix matrix_;
  Selectivity selectivity_;
  Provenance provenance_;
};

OperationMap identity_map(const SpacePtr& space);

/// `after` o `before`.
OperationMap then(const OperationMap& before, const OperationMap& after);

/// Causality normalization: ||M^T G e - G e||_inf <= tol, equivalently
/// <e, M c> = <e, c> for every c.
bool is_nonselective(const OperationMap& m, double tol = 1e-10);

/// Maps `samples` random cone elements and checks each image is in the cone.
bool is_positive_map(const OperationMap& m, std::size_t samples, std::uint64_t seed,
                     double tol = kDefaultTol);

struct Outcome {
  std::string label;
  OperationMap map;
};

/// Selective outcome operations together with their non-selective parent.
struct MeasurementSpec {
  std::string name;
  std::vector<Outcome> outcomes;
  OperationMap parent;

  /// Throws DomainError for an unknown label.
  const OperationMap& outcome(const std::string& label) const;
  std::vector<std::string> labels() const;
};

/// ||sum of outcome matrices - parent matrix||_inf.
double completeness_residual(const MeasurementSpec& spec);

/// <b2, M_A b1> / <b2, M_star b1>. Throws IncompatibleError when the
/// denominator is <= tol.
double conditioned_probability(const Element& b1, const Element& b2, const OperationMap& m_a,
                               const OperationMap& m_star, double tol = kDefaultTol);

/// <e, M_outcome b> for a normalized state b. Throws DomainError when b is
/// not normalized, the parent is not non-selective, or the label is unknown.
double predict(const Element& b, const MeasurementSpec& spec, const std::string& label,
               double tol = kDefaultTol);

/// M_A b / <e, M_A b>. Throws ConditioningError when <e, M_A b> <= tol.
Element update_state(const Element& b, const OperationMap& m_a, double tol = kDefaultTol);

/// One-parameter group T_delta of structure-preserving maps: either powers
/// of a permutation of a classical phase space, or conjugation by
/// exp(-i delta H) on a single quantum factor.
class EvolutionGroup {
 public:
  struct Permutation {
    std::vector<std::size_t> images;  // i -> v(i), 0-based
  };
  struct Hamiltonian {
    CMatrix h;
    HermitianEigen eig;
  };

  /// Requires a bijection that preserves the metric. Throws DomainError.
  static EvolutionGroup permutation(SpacePtr space, std::vector<std::size_t> images);
  /// Requires a single-factor quantum space and Hermitian H.
  static EvolutionGroup hamiltonian(SpacePtr space, CMatrix h);

  const SpacePtr& space() const { return space_; }
  bool is_permutation() const { return std::holds_alternative<Permutation>(kind_); }
  const std::variant<Permutation, Hamiltonian>& kind() const { return kind_; }

  /// T_delta as an operation. Permutation groups require integer delta.
  OperationMap map(double delta) const;
  /// U_delta = exp(-i delta H) (Hamiltonian groups only).
  CMatrix unitary(double delta) const;

 private:
  EvolutionGroup(SpacePtr space, std::variant<Permutation, Hamiltonian> kind);

  SpacePtr space_;
  std::variant<Permutation, Hamiltonian> kind_;
};

Element evolve(const EvolutionGroup& group, double delta, const Element& b);

/// Measurement step; an empty outcome means "performed but unobserved",
/// which applies the parent map.
struct MeasureStep {
  MeasurementSpec spec;
  std::optional<std::string> outcome;
};

struct EvolveStep {
  EvolutionGroup group;
  double delta;
};

using SequenceStep = std::variant<MeasureStep, EvolveStep>;

struct StepRecord {
  std::string name;
  std::string outcome;  // "unobserved" for unobserved steps
  double conditional_probability;
};

struct SequenceResult {
  double probability;
  Element final_state;
  std::vector<StepRecord> per_step;  // measurement steps only
};

/// Runs a sequence left to right from a normalized state `b`.
///
/// Without post-selection every step contributes <e, M_k c> for the running
/// normalized state c, which is then updated. Unobserved steps and
/// evolutions use non-selective maps, so their factors are 1 up to
/// rounding. With a post-selected final state b2 the total probability is <b2, S_A b> / <b2, S_* b>, where
/// S_A chains the selected operations and S_* their parents; the per-step
/// factors are the successive ratios of prefix probabilities, so they still
/// multiply to the total. The reported final state is the forward updated
/// state in both cases.
///
/// Throws ConditioningError naming the first zero-probability step, and
/// IncompatibleError when <b2, S_* b> vanishes.
SequenceResult run_sequence(const Element& b, const std::vector<SequenceStep>& steps,
                            const std::optional<Element>& post_selection = std::nullopt,
                            double tol = kDefaultTol);

}  // namespace posform
