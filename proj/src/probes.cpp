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

#include "posform/probes.hpp"

#include <cmath>
#include <random>
#include <set>
#include <utility>

#include <Eigen/Cholesky>

#include "posform/errors.hpp"

namespace posform {

namespace {

// Contracts factor `pos` of `v` (Kronecker layout over `dims`) with `w`,
// leaving a vector over the remaining factors in their original order.
Vector contract_factor(const Vector& v, const std::vector<std::size_t>& dims, std::size_t pos,
                       const Vector& w) {
  std::size_t left = 1;
  for (std::size_t k = 0; k < pos; ++k) left *= dims[k];
  std::size_t right = 1;
  for (std::size_t k = pos + 1; k < dims.size(); ++k) right *= dims[k];
  const std::size_t n = dims[pos];
  Vector out = Vector::Zero(static_cast<Eigen::Index>(left * right));
  for (std::size_t l = 0; l < left; ++l) {
    for (std::size_t s = 0; s < n; ++s) {
      const double ws = w(static_cast<Eigen::Index>(s));
      if (ws == 0.0) continue;
      for (std::size_t r = 0; r < right; ++r) {
        out(static_cast<Eigen::Index>(l * right + r)) += ws * v(static_cast<Eigen::Index>((l * n + s) * right + r));
      }
    }
  }
  return out;
}

Vector apply_metrics(const Vector& v, const std::vector<BoundaryFactor>& boundary, bool inverse) {
  std::vector<std::size_t> dims;
  for (const auto& f : boundary) dims.push_back(f.space->dim());
  Vector out = v;
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    const ModelSpace& s = *boundary[k].space;
    if (s.metric_is_identity()) continue;
    const Matrix op = inverse ? Matrix(s.metric().inverse()) : s.metric();
    out = apply_on_factor(out, dims, k, op);
  }
  return out;
}

Matrix default_orthonormal_basis(const ModelSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.dim());
  if (space.metric_is_identity()) return Matrix::Identity(n, n);
  // G = L L^T  =>  columns of L^-T are G-orthonormal.
  const Eigen::LLT<Matrix> llt(space.metric());
  const Matrix l_inv = llt.matrixL().solve(Matrix::Identity(n, n));
  return l_inv.transpose();
}

void require_bipartite_same_space(const ProbeFunctional& p, const char* op) {
  const auto& bd = p.boundary();
  if (bd.size() != 2) throw DimensionError(std::string(op) + ": probe boundary is not bipartite");
  if (!same_space(*bd[0].space, *bd[1].space)) {
    throw DimensionError(std::string(op) + ": initial and final factors differ");
  }
}

}  // namespace

ProbeFunctional::ProbeFunctional(std::vector<BoundaryFactor> boundary, Vector coeffs)
    : boundary_(std::move(boundary)), coeffs_(std::move(coeffs)) {
  if (boundary_.empty()) throw DimensionError("ProbeFunctional: empty boundary");
  std::set<std::string> labels;
  std::size_t total = 1;
  for (const auto& f : boundary_) {
    if (!f.space) throw DimensionError("ProbeFunctional: null space");
    if (!labels.insert(f.label).second) {
      throw DimensionError("ProbeFunctional: boundary label '" + f.label + "' is repeated");
    }
    total *= f.space->dim();
  }
  if (static_cast<std::size_t>(coeffs_.size()) != total) {
    throw DimensionError("ProbeFunctional: " + std::to_string(coeffs_.size()) +
                         " coefficients for a boundary of dimension " + std::to_string(total));
  }
}

std::vector<std::size_t> ProbeFunctional::dims() const {
  std::vector<std::size_t> out;
  for (const auto& f : boundary_) out.push_back(f.space->dim());
  return out;
}

std::vector<SpacePtr> ProbeFunctional::spaces() const {
  std::vector<SpacePtr> out;
  for (const auto& f : boundary_) out.push_back(f.space);
  return out;
}

std::optional<std::size_t> ProbeFunctional::find(const std::string& label) const {
  for (std::size_t k = 0; k < boundary_.size(); ++k) {
    if (boundary_[k].label == label) return k;
  }
  return std::nullopt;
}

ProbeFunctional ProbeFunctional::operator+(const ProbeFunctional& other) const {
  if (!same_boundary(*this, other)) throw DimensionError("probe sum: boundary mismatch");
  return {boundary_, coeffs_ + other.coeffs_};
}

ProbeFunctional ProbeFunctional::operator-(const ProbeFunctional& other) const {
  if (!same_boundary(*this, other)) throw DimensionError("probe difference: boundary mismatch");
  return {boundary_, coeffs_ - other.coeffs_};
}

ProbeFunctional ProbeFunctional::operator*(double s) const { return {boundary_, coeffs_ * s}; }

bool same_boundary(const ProbeFunctional& a, const ProbeFunctional& b) {
  const auto& x = a.boundary();
  const auto& y = b.boundary();
  if (x.size() != y.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k].label != y[k].label || !same_space(*x[k].space, *y[k].space)) return false;
  }
  return true;
}

ProbeFunctional zero_probe(std::vector<BoundaryFactor> boundary) {
  std::size_t total = 1;
  for (const auto& f : boundary) total *= f.space->dim();
  return {std::move(boundary), Vector::Zero(static_cast<Eigen::Index>(total))};
}

Vector evaluation_vector(const ProbeFunctional& p) {
  return apply_metrics(p.coeffs(), p.boundary(), /*inverse=*/false);
}

double pair(const ProbeFunctional& p, const Element& x) {
  if (x.space()->id() != p.boundary_id() || x.coords().size() != p.coeffs().size()) {
    throw DimensionError("pair: element of '" + x.space()->id() + "' does not match boundary '" +
                         p.boundary_id() + "'");
  }
  return evaluation_vector(p).dot(x.coords());
}

double outcome_probability(const ProbeFunctional& p_a, const ProbeFunctional& p_star,
                           const Element& x, double tol) {
  if (!same_boundary(p_a, p_star)) throw DimensionError("outcome_probability: boundary mismatch");
  const double reference = pair(p_star, x);
  if (reference <= tol) {
    throw IncompatibleError("outcome_probability: boundary condition incompatible with the setup");
  }
  const double ratio = pair(p_a, x) / reference;
  if (ratio < -tol || ratio > 1.0 + tol) {
    throw DomainError("outcome_probability: outcome probe is not dominated by the reference probe");
  }
  return ratio;
}

bool completeness_check(const std::vector<ProbeFunctional>& outcomes,
                        const ProbeFunctional& p_star, double tol) {
  Vector sum = Vector::Zero(p_star.coeffs().size());
  for (const auto& o : outcomes) {
    if (!same_boundary(o, p_star)) throw DimensionError("completeness_check: boundary mismatch");
    sum += o.coeffs();
  }
  return max_abs(Vector(sum - p_star.coeffs())) <= tol;
}

ProbeFunctional compose(const ProbeFunctional& p, const ProbeFunctional& q, const std::string& label,
                        const std::optional<Matrix>& shared_basis) {
  const auto i = p.find(label);
  const auto j = q.find(label);
  if (!i || !j) throw DimensionError("compose: shared factor '" + label + "' is absent");
  const SpacePtr& shared = p.boundary()[*i].space;
  if (!same_space(*shared, *q.boundary()[*j].space)) {
    throw DimensionError("compose: factor '" + label + "' names different spaces");
  }

  std::vector<BoundaryFactor> boundary;
  for (std::size_t k = 0; k < p.boundary().size(); ++k) {
    if (k != *i) boundary.push_back(p.boundary()[k]);
  }
  for (std::size_t k = 0; k < q.boundary().size(); ++k) {
    if (k != *j) boundary.push_back(q.boundary()[k]);
  }
  if (boundary.empty()) throw DimensionError("compose: the composite has an empty boundary");

  const auto n = static_cast<Eigen::Index>(shared->dim());
  Matrix xi;
  if (shared_basis) {
    xi = *shared_basis;
    if (xi.rows() != n || xi.cols() != n) throw DimensionError("compose: basis has the wrong shape");
    const Matrix gram = xi.transpose() * shared->metric() * xi;
    if (max_abs(Matrix(gram - Matrix::Identity(n, n))) > 1e-10) {
      throw DomainError("compose: basis is not orthonormal for the shared metric");
    }
  } else {
    xi = default_orthonormal_basis(*shared);
  }

  const Vector p_eval = evaluation_vector(p);
  const Vector q_eval = evaluation_vector(q);
  const auto p_dims = p.dims();
  const auto q_dims = q.dims();
  Vector r_eval;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vector u = contract_factor(p_eval, p_dims, *i, xi.col(k));
    const Vector v = contract_factor(q_eval, q_dims, *j, xi.col(k));
    if (k == 0) {
      r_eval = kron(u, v);
    } else {
      r_eval += kron(u, v);
    }
  }
  // Throws on repeated labels in the composite boundary.
  ProbeFunctional shape = zero_probe(boundary);
  return {std::move(boundary), apply_metrics(r_eval, shape.boundary(), /*inverse=*/true)};
}

OperationMap probe_to_map(const ProbeFunctional& p) {
  require_bipartite_same_space(p, "probe_to_map");
  const SpacePtr& space = p.boundary()[0].space;
  const auto n = static_cast<Eigen::Index>(space->dim());
  // [[P, b1 ⊗ b2]] = b1^T G C G b2 = <b2, M b1>  =>  M = C^T G.
  Matrix c(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index s = 0; s < n; ++s) c(r, s) = p.coeffs()(r * n + s);
  }
  OperationMap m(space, c.transpose() * space->metric());
  if (is_nonselective(m)) {
    return {space, m.matrix(), Selectivity::nonselective, Provenance::generic};
  }
  return m;
}

ProbeFunctional map_to_probe(const OperationMap& m, const std::string& in_label,
                             const std::string& out_label) {
  const SpacePtr& space = m.space();
  const auto n = static_cast<Eigen::Index>(space->dim());
  const Matrix c = space->metric_is_identity()
                       ? Matrix(m.matrix().transpose())
                       : Matrix(space->metric().ldlt().solve(m.matrix().transpose()));
  Vector coeffs(n * n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index s = 0; s < n; ++s) coeffs(r * n + s) = c(r, s);
  }
  return {{{in_label, space}, {out_label, space}}, std::move(coeffs)};
}

ProbeFunctional transparent_probe(const SpacePtr& space, const std::string& in_label,
                                  const std::string& out_label) {
  return map_to_probe(identity_map(space), in_label, out_label);
}

bool is_proper(const ProbeFunctional& p, std::size_t samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  const Vector eval = evaluation_vector(p);
  for (std::size_t k = 0; k < samples; ++k) {
    Vector x = Vector::Ones(1);
    for (const auto& f : p.boundary()) x = kron(x, sample_cone_element(f.space, rng).coords());
    const double value = eval.dot(x);
    const double scale = eval.cwiseAbs().dot(x.cwiseAbs());
    if (value < -tol * scale) return false;
  }
  return true;
}

}  // namespace posform
