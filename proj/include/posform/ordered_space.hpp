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

// Finite-dimensional ordered vector spaces: inner product, positive cone,
// partial order and order unit. Two cone kinds exist: componentwise
// (functions on a finite set) and psd (Hermitian matrices), both possibly
// tensored with factors of the same kind.

#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "posform/linalg.hpp"

namespace posform {

enum class FactorKind { classical, quantum };

/// One tensor factor: `size` points of a phase space, or a Hilbert space of
/// dimension `size`.
struct Factor {
  FactorKind kind;
  std::size_t size;

  std::size_t dim() const { return kind == FactorKind::classical ? size : size * size; }
  bool operator==(const Factor&) const = default;
};

enum class ConeKind { componentwise, psd };

class ModelSpace;
using SpacePtr = std::shared_ptr<const ModelSpace>;

class ModelSpace {
 public:
  /// Checks that `metric` is symmetric positive definite and that `unit` is
  /// an interior point of the cone (strictly positive entries, or a strictly
  /// positive definite matrix form). Mixed classical/quantum factor lists
  /// are rejected.
  static SpacePtr create(std::string id, std::vector<Factor> factors, Matrix metric, Vector unit);

  const std::string& id() const { return id_; }
  std::size_t dim() const { return dim_; }
  const Matrix& metric() const { return metric_; }
  const Vector& unit() const { return unit_; }
  const std::vector<Factor>& factors() const { return factors_; }
  ConeKind cone_kind() const { return cone_kind_; }

  /// Hilbert dimension d of a psd(d) cone, 0 for componentwise cones.
  std::size_t psd_size() const { return psd_size_; }

  /// Per-factor orthonormal Hermitian bases (psd spaces only). The storage
  /// basis of the space is their Kronecker product.
  const std::vector<std::vector<CMatrix>>& factor_bases() const { return factor_bases_; }

  bool metric_is_identity() const { return metric_is_identity_; }

 private:
  friend SpacePtr product_space(const SpacePtr& a, const SpacePtr& b);
  friend SpacePtr product_space(const std::vector<SpacePtr>& spaces);
  // Kronecker products of valid factors are valid, so products skip the
  // metric and unit checks.
  static SpacePtr build(std::string id, std::vector<Factor> factors, Matrix metric, Vector unit,
                        bool validate);
  ModelSpace() = default;

  std::string id_;
  std::vector<Factor> factors_;
  std::size_t dim_ = 0;
  Matrix metric_;
  Vector unit_;
  ConeKind cone_kind_ = ConeKind::componentwise;
  std::size_t psd_size_ = 0;
  std::vector<std::vector<CMatrix>> factor_bases_;
  bool metric_is_identity_ = false;
};

/// A vector of a ModelSpace (a generalized state or boundary condition).
class Element {
 public:
  Element(SpacePtr space, Vector coords);

  const SpacePtr& space() const { return space_; }
  const Vector& coords() const { return coords_; }
  std::size_t dim() const { return static_cast<std::size_t>(coords_.size()); }

  Element operator+(const Element& other) const;
  Element operator-(const Element& other) const;
  Element operator*(double s) const;

 private:
  SpacePtr space_;
  Vector coords_;
};

inline Element operator*(double s, const Element& e) { return e * s; }

/// Two spaces are the same when their identifiers and dimensions agree.
bool same_space(const ModelSpace& a, const ModelSpace& b);

/// Throws DimensionError unless `a` and `b` live in the same space.
void require_same_space(const Element& a, const Element& b, const char* op);

/// Orthonormal Hermitian basis of the d x d Hermitian matrices under the
/// trace inner product: identity/sqrt(d), then for each pair j<k the
/// symmetric and antisymmetric off-diagonal elements, then the d-1
/// trace-zero diagonal elements. For d=2 this is (I, X, Y, Z)/sqrt(2).
std::vector<CMatrix> hermitian_basis(std::size_t d);

/// Tensor product space: Kronecker metric and unit, concatenated factors,
/// identifier "a⊗b".
SpacePtr product_space(const SpacePtr& a, const SpacePtr& b);
SpacePtr product_space(const std::vector<SpacePtr>& spaces);

/// Identifier product_space() would assign to the given factor list.
std::string product_id(const std::vector<SpacePtr>& spaces);

Element unit_element(const SpacePtr& space);
Element zero_element(const SpacePtr& space);

double inner(const Element& b, const Element& c);

/// Cone membership with a relative tolerance: the smallest coordinate (or
/// eigenvalue of the matrix form) must be >= -tol * max-norm of `b`.
bool is_positive(const Element& b, double tol = kDefaultTol);

/// b <= c in the cone order.
bool leq(const Element& b, const Element& c, double tol = kDefaultTol);

/// Least lambda >= 0 with b <= lambda * e. Throws DomainError when b is not
/// in the cone.
double order_unit_lambda(const Element& b, double tol = kDefaultTol);

/// b / <e, b>. Throws DomainError outside the cone and ZeroStateError when
/// <e, b> <= tol.
Element normalize_state(const Element& b, double tol = kDefaultTol);

Element tensor_element(const Element& b, const Element& c);

/// Hermitian matrix represented by an element of a psd space.
CMatrix matrix_form(const Element& b);

/// Coordinates of a Hermitian matrix in a psd space. Throws DomainError for
/// non-Hermitian input and DimensionError for a size mismatch.
Element from_matrix(const SpacePtr& space, const CMatrix& m);

/// Random element of the cone: uniform [0,1) entries, or a random-rank
/// complex Wishart matrix with trace in [0.5, 2).
Element sample_cone_element(const SpacePtr& space, std::mt19937_64& rng);

}  // namespace posform
