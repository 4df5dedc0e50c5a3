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

// Quantum model: Hermitian matrices on C^d with the Hilbert-Schmidt inner
// product tr(bc), the PSD cone and the identity as order unit. Complex
// matrices are used throughout; real coordinates appear only where the
// ordered-space layer needs them.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "posform/linalg.hpp"
#include "posform/operational.hpp"
#include "posform/ordered_space.hpp"

namespace posform {

/// dim = d^2, psd(d) cone, identity metric in the orthonormal Hermitian
/// storage basis, unit = identity matrix. An empty id becomes "qudit<d>".
SpacePtr make_quantum_space(std::size_t d, std::string id = "");

/// A unit vector of C^d.
class StateVector {
 public:
  /// Normalizes `amplitudes`; throws DomainError for the zero vector.
  explicit StateVector(CVector amplitudes);

  const CVector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

 private:
  CVector amplitudes_;
};

/// |psi><psi| for the normalized psi.
CMatrix pure_state(const StateVector& psi);
CMatrix pure_state(const CVector& amplitudes);

class KrausSet {
 public:
  /// Throws DimensionError for an empty list or non-square/mismatched
  /// operators.
  explicit KrausSet(std::vector<CMatrix> operators);

  const std::vector<CMatrix>& operators() const { return operators_; }
  std::size_t dim() const { return static_cast<std::size_t>(operators_.front().rows()); }

 private:
  std::vector<CMatrix> operators_;
};

/// sum_i K_i b K_i^dagger.
CMatrix apply_kraus(const KrausSet& kraus, const CMatrix& b);

/// ||sum_i K_i^dagger K_i - I||_inf <= tol.
bool kraus_nonselective_check(const KrausSet& kraus, double tol = 1e-10);

/// Real-linear map on Hermitian matrices, given as a function, expressed in
/// storage coordinates of a single-factor quantum space.
OperationMap superoperator_map(const SpacePtr& space,
                               const std::function<CMatrix(const CMatrix&)>& action,
                               Selectivity selectivity, Provenance provenance);

/// Operation b -> sum_i K_i b K_i^dagger, flagged non-selective exactly
/// when kraus_nonselective_check passes.
OperationMap kraus_map(const SpacePtr& space, const KrausSet& kraus);

/// b -> U b U^dagger.
OperationMap unitary_conjugation(const SpacePtr& space, const CMatrix& u);

/// b -> b^T (positive but not completely positive).
OperationMap transpose_map(const SpacePtr& space);

/// Action of an operation on an arbitrary complex matrix, by complex
/// linear extension from Hermitian inputs.
CMatrix apply_complexified(const OperationMap& m, const CMatrix& x);

struct ChoiReport {
  CMatrix choi;  // sum_ij M(E_ij) ⊗ E_ij, size d^2
  bool is_cp;
  double min_eigenvalue;
};

ChoiReport choi_cp_check(const OperationMap& m, double tol = 1e-10);

struct SpectralProjector {
  double eigenvalue;
  CMatrix projector;
};

/// Spectral decomposition sum_i a_i P_i with strictly increasing a_i.
struct ObservableDecomposition {
  std::vector<SpectralProjector> pairs;

  CMatrix reconstruct() const;
};

struct SpectralMeasurement {
  MeasurementSpec spec;
  ObservableDecomposition decomposition;
};

/// Canonical outcome label of an eigenvalue: shortest decimal that
/// round-trips ("1", "-1", "0.5").
std::string eigenvalue_label(double a);

/// Projective measurement of the observable A. Eigenvalues closer than
/// `degeneracy_tol` (default 1e-9 * ||A||_inf) are merged
/// into one outcome. Outcome k is b -> P_k b P_k, labelled by
/// eigenvalue_label(a_k); the parent is b -> sum_i P_i b P_i.
SpectralMeasurement spectral_measurement(const SpacePtr& space, const CMatrix& observable,
                                         std::optional<double> degeneracy_tol = std::nullopt,
                                         std::string name = "observable");

/// Projective measurement for an explicit list of orthogonal projectors
/// summing to the identity. Throws DomainError otherwise.
MeasurementSpec projective_measurement(const SpacePtr& space, const std::vector<CMatrix>& projectors,
                                       const std::vector<std::string>& labels,
                                       std::string name = "projective");

/// Throws DomainError unless P is Hermitian and idempotent within tol.
void require_projector(const CMatrix& p, double tol = 1e-10);

/// Born rule tr(P b). Throws DomainError for a non-projector.
double born(const CMatrix& b, const CMatrix& projector, double tol = 1e-10);
/// |<eta, psi>|^2.
double born_pure(const StateVector& psi, const StateVector& eta);

/// Lüders update P b P / tr(P b). Throws ConditioningError when tr(P b) <= tol.
CMatrix luders(const CMatrix& b, const CMatrix& projector, double tol = kDefaultTol);
/// P psi / sqrt(<psi, P psi>), phase fixed so that the largest-modulus
/// amplitude is real and non-negative.
StateVector luders_pure(const StateVector& psi, const CMatrix& projector, double tol = kDefaultTol);

/// Evolution group of the Hamiltonian H on `space`.
EvolutionGroup hamiltonian_evolution(const SpacePtr& space, const CMatrix& h);

/// U_t b U_t^dagger with U_t = exp(-i t H).
CMatrix exact_evolution(const CMatrix& h, const CMatrix& b, double t);

/// Classical RK4 integration of db/dt = -i[H, b] up to time t with about
/// t/dt steps (the step is shrunk to land exactly on t).
CMatrix liouville_integrate(const CMatrix& h, const CMatrix& b, double t, double dt = 1e-3);

/// Classical RK4 integration of dpsi/dt = -i H psi.
CVector schrodinger_integrate(const CMatrix& h, const CVector& psi, double t, double dt = 1e-3);

}  // namespace posform
