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

#include "posform/ordered_space.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "posform/errors.hpp"

namespace posform {

namespace {

// Storage basis element `flat` of a psd space, as a Kronecker product of
// per-factor basis matrices.
CMatrix product_basis_element(const ModelSpace& space, std::size_t flat) {
  const auto& factors = space.factors();
  const auto& bases = space.factor_bases();
  std::vector<std::size_t> digits(factors.size());
  for (std::size_t f = factors.size(); f-- > 0;) {
    const std::size_t n = factors[f].dim();
    digits[f] = flat % n;
    flat /= n;
  }
  CMatrix out = bases[0][digits[0]];
  for (std::size_t f = 1; f < factors.size(); ++f) out = kron(out, bases[f][digits[f]]);
  return out;
}

Vector psd_eigenvalues(const Element& b) {
  const CMatrix m = matrix_form(b);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace

SpacePtr ModelSpace::create(std::string id, std::vector<Factor> factors, Matrix metric,
                            Vector unit) {
  return build(std::move(id), std::move(factors), std::move(metric), std::move(unit), true);
}

SpacePtr ModelSpace::build(std::string id, std::vector<Factor> factors, Matrix metric, Vector unit,
                           bool validate) {
  if (factors.empty()) throw DimensionError("ModelSpace: at least one factor is required");
  const bool quantum = factors.front().kind == FactorKind::quantum;
  std::size_t dim = 1;
  std::size_t psd = 1;
  for (const Factor& f : factors) {
    if (f.size == 0) throw DimensionError("ModelSpace: factor of size zero");
    if ((f.kind == FactorKind::quantum) != quantum) {
      throw UnsupportedError("ModelSpace: mixed classical/quantum tensor products are not supported");
    }
    dim *= f.dim();
    psd *= f.size;
  }
  const auto n = static_cast<Eigen::Index>(dim);
  if (metric.rows() != n || metric.cols() != n || unit.size() != n) {
    throw DimensionError("ModelSpace '" + id + "': metric/unit shape does not match dimension " +
                         std::to_string(dim));
  }
  if (validate) {
    if (max_abs(Matrix(metric - metric.transpose())) > 1e-12 * std::max(1.0, max_abs(metric))) {
      throw DomainError("ModelSpace '" + id + "': metric is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> metric_eig(metric, Eigen::EigenvaluesOnly);
    if (metric_eig.eigenvalues()(0) <= 0.0) {
      throw DomainError("ModelSpace '" + id + "': metric is not positive definite");
    }
  }

  std::shared_ptr<ModelSpace> space(new ModelSpace());
  space->id_ = std::move(id);
  space->factors_ = std::move(factors);
  space->dim_ = dim;
  space->metric_ = std::move(metric);
  space->unit_ = std::move(unit);
  space->cone_kind_ = quantum ? ConeKind::psd : ConeKind::componentwise;
  space->psd_size_ = quantum ? psd : 0;
  if (quantum) {
    for (const Factor& f : space->factors_) space->factor_bases_.push_back(hermitian_basis(f.size));
  }
  space->metric_is_identity_ = space->metric_.isIdentity(0.0);

  // The order-unit property is certified by interiority of the unit.
  if (!validate) return space;
  if (quantum) {
    const Element e(space, space->unit_);
    if (psd_eigenvalues(e)(0) <= 0.0) {
      throw DomainError("ModelSpace '" + space->id_ + "': unit is not strictly positive definite");
    }
  } else if (space->unit_.minCoeff() <= 0.0) {
    throw DomainError("ModelSpace '" + space->id_ + "': unit has a non-positive component");
  }
  return space;
}

Element::Element(SpacePtr space, Vector coords) : space_(std::move(space)), coords_(std::move(coords)) {
  if (!space_) throw DimensionError("Element: null space");
  if (static_cast<std::size_t>(coords_.size()) != space_->dim()) {
    throw DimensionError("Element: " + std::to_string(coords_.size()) +
                         " coordinates for space '" + space_->id() + "' of dimension " +
                         std::to_string(space_->dim()));
  }
}

Element Element::operator+(const Element& other) const {
  require_same_space(*this, other, "operator+");
  return {space_, coords_ + other.coords_};
}

Element Element::operator-(const Element& other) const {
  require_same_space(*this, other, "operator-");
  return {space_, coords_ - other.coords_};
}

Element Element::operator*(double s) const { return {space_, coords_ * s}; }

bool same_space(const ModelSpace& a, const ModelSpace& b) {
  return &a == &b || (a.id() == b.id() && a.dim() == b.dim());
}

void require_same_space(const Element& a, const Element& b, const char* op) {
  if (!same_space(*a.space(), *b.space())) {
    throw DimensionError(std::string(op) + ": space mismatch ('" + a.space()->id() + "' vs '" +
                         b.space()->id() + "')");
  }
}

std::vector<CMatrix> hermitian_basis(std::size_t d) {
  std::vector<CMatrix> basis;
  basis.reserve(d * d);
  const auto n = static_cast<Eigen::Index>(d);
  basis.push_back(CMatrix::Identity(n, n) / std::sqrt(static_cast<double>(d)));
  const double r2 = std::sqrt(2.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j + 1; k < d; ++k) {
      basis.push_back((matrix_unit(d, j, k) + matrix_unit(d, k, j)) / r2);
      basis.push_back((cplx(0, -1) * matrix_unit(d, j, k) + cplx(0, 1) * matrix_unit(d, k, j)) / r2);
    }
  }
  for (std::size_t l = 1; l < d; ++l) {
    CMatrix m = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < l; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) = -static_cast<double>(l);
    basis.push_back(m / std::sqrt(static_cast<double>(l * (l + 1))));
  }
  return basis;
}

std::string product_id(const std::vector<SpacePtr>& spaces) {
  std::string id;
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    if (k > 0) id += "⊗";
    id += spaces[k]->id();
  }
  return id;
}

SpacePtr product_space(const SpacePtr& a, const SpacePtr& b) {
  std::vector<Factor> factors = a->factors();
  factors.insert(factors.end(), b->factors().begin(), b->factors().end());
  return ModelSpace::build(product_id({a, b}), std::move(factors), kron(a->metric(), b->metric()),
                           kron(a->unit(), b->unit()), false);
}

SpacePtr product_space(const std::vector<SpacePtr>& spaces) {
  if (spaces.empty()) throw DimensionError("product_space: empty factor list");
  if (spaces.size() == 1) return spaces.front();
  std::vector<Factor> factors;
  Matrix metric = Matrix::Ones(1, 1);
  Vector unit = Vector::Ones(1);
  for (const SpacePtr& s : spaces) {
    factors.insert(factors.end(), s->factors().begin(), s->factors().end());
    metric = kron(metric, s->metric());
    unit = kron(unit, s->unit());
  }
  return ModelSpace::build(product_id(spaces), std::move(factors), std::move(metric), std::move(unit), false);
}

Element unit_element(const SpacePtr& space) { return {space, space->unit()}; }

Element zero_element(const SpacePtr& space) {
  return {space, Vector::Zero(static_cast<Eigen::Index>(space->dim()))};
}

double inner(const Element& b, const Element& c) {
  require_same_space(b, c, "inner");
  const auto& space = *b.space();
  if (space.metric_is_identity()) return b.coords().dot(c.coords());
  return b.coords().dot(space.metric() * c.coords());
}

bool is_positive(const Element& b, double tol) {
  if (b.space()->cone_kind() == ConeKind::componentwise) {
    if (b.dim() == 0) return true;
    return b.coords().minCoeff() >= -tol * max_abs(b.coords());
  }
  const Vector ev = psd_eigenvalues(b);
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) >= -tol * scale;
}

bool leq(const Element& b, const Element& c, double tol) {
  require_same_space(b, c, "leq");
  return is_positive(c - b, tol);
}

double order_unit_lambda(const Element& b, double tol) {
  if (!is_positive(b, tol)) throw DomainError("order_unit_lambda: element is not in the cone");
  const ModelSpace& space = *b.space();
  if (space.cone_kind() == ConeKind::componentwise) {
    return std::max(0.0, b.coords().cwiseQuotient(space.unit()).maxCoeff());
  }
  // Largest generalized eigenvalue of (B, E): eigenvalues of L^-1 B L^-H.
  const CMatrix e = matrix_form(unit_element(b.space()));
  const Eigen::LLT<CMatrix> llt(e);
  const CMatrix l_inv = llt.matrixL().solve(CMatrix::Identity(e.rows(), e.cols()));
  return std::max(0.0, max_eigenvalue(l_inv * matrix_form(b) * l_inv.adjoint()));
}

Element normalize_state(const Element& b, double tol) {
  if (!is_positive(b, tol)) throw DomainError("normalize_state: element is not in the cone");
  const double mass = inner(unit_element(b.space()), b);
  if (mass <= tol) throw ZeroStateError("normalize_state: <e, b> vanishes");
  return b * (1.0 / mass);
}

Element tensor_element(const Element& b, const Element& c) {
  return {product_space(b.space(), c.space()), kron(b.coords(), c.coords())};
}

CMatrix matrix_form(const Element& b) {
  const ModelSpace& space = *b.space();
  if (space.cone_kind() != ConeKind::psd) {
    throw DomainError("matrix_form: space '" + space.id() + "' has no matrix form");
  }
  const auto n = static_cast<Eigen::Index>(space.psd_size());
  CMatrix m = CMatrix::Zero(n, n);
  if (space.factors().size() == 1) {
    const auto& basis = space.factor_bases()[0];
    for (std::size_t k = 0; k < basis.size(); ++k) m += b.coords()(static_cast<Eigen::Index>(k)) * basis[k];
    return m;
  }
  for (std::size_t k = 0; k < space.dim(); ++k) {
    const double c = b.coords()(static_cast<Eigen::Index>(k));
    if (c != 0.0) m += c * product_basis_element(space, k);
  }
  return m;
}

Element from_matrix(const SpacePtr& space, const CMatrix& m) {
  if (space->cone_kind() != ConeKind::psd) {
    throw DomainError("from_matrix: space '" + space->id() + "' has no matrix form");
  }
  const auto n = static_cast<Eigen::Index>(space->psd_size());
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError("from_matrix: expected a " + std::to_string(n) + "x" + std::to_string(n) +
                         " matrix");
  }
  if (!is_hermitian(m, 1e-12 * std::max(1.0, max_abs(m)))) {
    throw DomainError("from_matrix: matrix is not Hermitian");
  }
  Vector coords(static_cast<Eigen::Index>(space->dim()));
  if (space->factors().size() == 1) {
    const auto& basis = space->factor_bases()[0];
    for (std::size_t k = 0; k < basis.size(); ++k) {
      coords(static_cast<Eigen::Index>(k)) = (basis[k] * m).trace().real();
    }
  } else {
    for (std::size_t k = 0; k < space->dim(); ++k) {
      coords(static_cast<Eigen::Index>(k)) = (product_basis_element(*space, k) * m).trace().real();
    }
  }
  return {space, std::move(coords)};
}

Element sample_cone_element(const SpacePtr& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  if (space->cone_kind() == ConeKind::componentwise) {
    Vector v(static_cast<Eigen::Index>(space->dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform(rng);
    return {space, std::move(v)};
  }
  const auto n = static_cast<Eigen::Index>(space->psd_size());
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<Eigen::Index> rank_dist(1, n);
  const Eigen::Index rank = rank_dist(rng);
  CMatrix g(n, rank);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  }
  CMatrix w = g * g.adjoint();
  w *= (0.5 + 1.5 * uniform(rng)) / w.trace().real();
  w = 0.5 * (w + w.adjoint());
  return from_matrix(space, w);
}

}  // namespace posform
