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

#include "posform/quantum.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

#include "posform/errors.hpp"

namespace posform {

namespace {

void require_single_quantum(const SpacePtr& space, const char* op) {
  if (space->cone_kind() != ConeKind::psd || space->factors().size() != 1) {
    throw DomainError(std::string(op) + ": requires a single-factor quantum space");
  }
}

void require_square(const CMatrix& m, std::size_t d, const char* op) {
  if (m.rows() != static_cast<Eigen::Index>(d) || m.cols() != static_cast<Eigen::Index>(d)) {
    throw DimensionError(std::string(op) + ": expected a " + std::to_string(d) + "x" +
                         std::to_string(d) + " matrix");
  }
}

OperationMap kraus_map_as(const SpacePtr& space, const KrausSet& kraus, Selectivity selectivity) {
  return superoperator_map(
      space, [&](const CMatrix& b) { return apply_kraus(kraus, b); }, selectivity, Provenance::kraus);
}

CMatrix liouville_rhs(const CMatrix& h, const CMatrix& b) {
  return cplx(0.0, -1.0) * (h * b - b * h);
}

std::size_t step_count(double t, double dt) {
  if (!(dt > 0.0)) throw DomainError("integrator: dt must be positive");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(t) / dt - 1e-9)));
}

}  // namespace

SpacePtr make_quantum_space(std::size_t d, std::string id) {
  if (d == 0) throw DimensionError("make_quantum_space: d must be at least 1");
  if (id.empty()) id = "qudit" + std::to_string(d);
  const auto n = static_cast<Eigen::Index>(d * d);
  Vector unit = Vector::Zero(n);
  unit(0) = std::sqrt(static_cast<double>(d));  // identity = sqrt(d) * (identity / sqrt(d))
  return ModelSpace::create(std::move(id), {{FactorKind::quantum, d}}, Matrix::Identity(n, n),
                            std::move(unit));
}

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  const double norm = amplitudes_.norm();
  if (amplitudes_.size() == 0 || !(norm > 0.0)) throw DomainError("StateVector: zero vector");
  amplitudes_ /= norm;
}

CMatrix pure_state(const StateVector& psi) { return psi.amplitudes() * psi.amplitudes().adjoint(); }

CMatrix pure_state(const CVector& amplitudes) { return pure_state(StateVector(amplitudes)); }

KrausSet::KrausSet(std::vector<CMatrix> operators) : operators_(std::move(operators)) {
  if (operators_.empty()) throw DimensionError("KrausSet: empty operator list");
  const Eigen::Index d = operators_.front().rows();
  for (const CMatrix& k : operators_) {
    if (k.rows() != d || k.cols() != d || d == 0) {
      throw DimensionError("KrausSet: operators must be square and of equal size");
    }
  }
}

CMatrix apply_kraus(const KrausSet& kraus, const CMatrix& b) {
  require_square(b, kraus.dim(), "apply_kraus");
  CMatrix out = CMatrix::Zero(b.rows(), b.cols());
  for (const CMatrix& k : kraus.operators()) out += k * b * k.adjoint();
  return out;
}

bool kraus_nonselective_check(const KrausSet& kraus, double tol) {
  const auto d = static_cast<Eigen::Index>(kraus.dim());
  CMatrix sum = CMatrix::Zero(d, d);
  for (const CMatrix& k : kraus.operators()) sum += k.adjoint() * k;
  return max_abs(CMatrix(sum - CMatrix::Identity(d, d))) <= tol;
}

OperationMap superoperator_map(const SpacePtr& space,
                               const std::function<CMatrix(const CMatrix&)>& action,
                               Selectivity selectivity, Provenance provenance) {
  require_single_quantum(space, "superoperator_map");
  const auto& basis = space->factor_bases()[0];
  const auto n = static_cast<Eigen::Index>(basis.size());
  Matrix m(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    const CMatrix image = action(basis[static_cast<std::size_t>(l)]);
    for (Eigen::Index k = 0; k < n; ++k) {
      m(k, l) = (basis[static_cast<std::size_t>(k)] * image).trace().real();
    }
  }
  return {space, std::move(m), selectivity, provenance};
}

OperationMap kraus_map(const SpacePtr& space, const KrausSet& kraus) {
  require_single_quantum(space, "kraus_map");
  if (kraus.dim() != space->psd_size()) throw DimensionError("kraus_map: Kraus operators have the wrong size");
  return kraus_map_as(space, kraus,
                      kraus_nonselective_check(kraus) ? Selectivity::nonselective : Selectivity::selective);
}

OperationMap unitary_conjugation(const SpacePtr& space, const CMatrix& u) {
  require_single_quantum(space, "unitary_conjugation");
  require_square(u, space->psd_size(), "unitary_conjugation");
  const auto d = static_cast<Eigen::Index>(space->psd_size());
  if (max_abs(CMatrix(u.adjoint() * u - CMatrix::Identity(d, d))) > 1e-10) {
    throw DomainError("unitary_conjugation: matrix is not unitary");
  }
  return superoperator_map(
      space, [&](const CMatrix& b) { return CMatrix(u * b * u.adjoint()); }, Selectivity::nonselective,
      Provenance::unitary);
}

OperationMap transpose_map(const SpacePtr& space) {
  return superoperator_map(
      space, [](const CMatrix& b) { return CMatrix(b.transpose()); }, Selectivity::nonselective,
      Provenance::generic);
}

CMatrix apply_complexified(const OperationMap& m, const CMatrix& x) {
  const SpacePtr& space = m.space();
  require_single_quantum(space, "apply_complexified");
  const CMatrix re = 0.5 * (x + x.adjoint());
  const CMatrix im = cplx(0.0, -0.5) * (x - x.adjoint());
  const CMatrix m_re = matrix_form(m.apply(from_matrix(space, re)));
  const CMatrix m_im = matrix_form(m.apply(from_matrix(space, im)));
  return m_re + cplx(0.0, 1.0) * m_im;
}

ChoiReport choi_cp_check(const OperationMap& m, double tol) {
  require_single_quantum(m.space(), "choi_cp_check");
  const std::size_t d = m.space()->psd_size();
  const auto dd = static_cast<Eigen::Index>(d * d);
  CMatrix choi = CMatrix::Zero(dd, dd);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const CMatrix unit = matrix_unit(d, i, j);
      choi += kron(apply_complexified(m, unit), unit);
    }
  }
  const double lambda_min = min_eigenvalue(choi);
  return {std::move(choi), lambda_min >= -tol, lambda_min};
}

CMatrix ObservableDecomposition::reconstruct() const {
  if (pairs.empty()) return {};
  CMatrix out = CMatrix::Zero(pairs.front().projector.rows(), pairs.front().projector.cols());
  for (const auto& p : pairs) out += p.eigenvalue * p.projector;
  return out;
}

std::string eigenvalue_label(double a) {
  if (a == 0.0) a = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", a);
  const double rounded = std::strtod(buf, nullptr);
  const double value = std::abs(rounded - a) <= 1e-12 * std::max(1.0, std::abs(a)) ? rounded : a;
  auto res = std::to_chars(buf, buf + sizeof buf, value == 0.0 ? 0.0 : value);
  return std::string(buf, res.ptr);
}

SpectralMeasurement spectral_measurement(const SpacePtr& space, const CMatrix& observable,
                                         std::optional<double> degeneracy_tol, std::string name) {
  require_single_quantum(space, "spectral_measurement");
  const std::size_t d = space->psd_size();
  require_square(observable, d, "spectral_measurement");
  if (!is_hermitian(observable, 1e-12 * std::max(1.0, max_abs(observable)))) {
    throw DomainError("spectral_measurement: observable is not Hermitian");
  }
  const double tol = degeneracy_tol.value_or(1e-9 * max_abs(observable));
  const HermitianEigen eig = eigh(observable);

  ObservableDecomposition decomposition;
  std::size_t start = 0;
  const auto n = static_cast<std::size_t>(eig.values.size());
  for (std::size_t k = 1; k <= n; ++k) {
    if (k < n && eig.values(static_cast<Eigen::Index>(k)) - eig.values(static_cast<Eigen::Index>(k - 1)) <= tol) continue;
    CMatrix projector = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    double mean = 0.0;
    for (std::size_t j = start; j < k; ++j) {
      const CVector v = eig.vectors.col(static_cast<Eigen::Index>(j));
      projector += v * v.adjoint();
      mean += eig.values(static_cast<Eigen::Index>(j));
    }
    decomposition.pairs.push_back({mean / static_cast<double>(k - start), std::move(projector)});
    start = k;
  }

  std::vector<CMatrix> projectors;
  std::vector<std::string> labels;
  for (const auto& p : decomposition.pairs) {
    projectors.push_back(p.projector);
    labels.push_back(eigenvalue_label(p.eigenvalue));
  }
  return {projective_measurement(space, projectors, labels, std::move(name)), std::move(decomposition)};
}

MeasurementSpec projective_measurement(const SpacePtr& space, const std::vector<CMatrix>& projectors,
                                       const std::vector<std::string>& labels, std::string name) {
  require_single_quantum(space, "projective_measurement");
  const std::size_t d = space->psd_size();
  if (projectors.empty() || projectors.size() != labels.size()) {
    throw DimensionError("projective_measurement: need one label per projector");
  }
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix sum = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    require_square(projectors[i], d, "projective_measurement");
    require_projector(projectors[i]);
    for (std::size_t j = i + 1; j < projectors.size(); ++j) {
      if (max_abs(CMatrix(projectors[i] * projectors[j])) > 1e-10) {
        throw DomainError("projective_measurement: projectors are not mutually orthogonal");
      }
      if (labels[i] == labels[j]) throw DomainError("projective_measurement: repeated label");
    }
    sum += projectors[i];
  }
  if (max_abs(CMatrix(sum - CMatrix::Identity(n, n))) > 1e-10) {
    throw DomainError("projective_measurement: projectors do not sum to the identity");
  }
  MeasurementSpec spec{std::move(name), {}, kraus_map_as(space, KrausSet(projectors), Selectivity::nonselective)};
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    spec.outcomes.push_back({labels[i], kraus_map_as(space, KrausSet({projectors[i]}), Selectivity::selective)});
  }
  return spec;
}

void require_projector(const CMatrix& p, double tol) {
  if (p.rows() != p.cols() || !is_hermitian(p, tol) || max_abs(CMatrix(p * p - p)) > tol) {
    throw DomainError("not an orthogonal projector");
  }
}

double born(const CMatrix& b, const CMatrix& projector, double tol) {
  require_projector(projector, tol);
  require_square(b, static_cast<std::size_t>(projector.rows()), "born");
  return (projector * b).trace().real();
}

double born_pure(const StateVector& psi, const StateVector& eta) {
  if (psi.dim() != eta.dim()) throw DimensionError("born_pure: dimension mismatch");
  return std::norm(eta.amplitudes().dot(psi.amplitudes()));
}

CMatrix luders(const CMatrix& b, const CMatrix& projector, double tol) {
  require_projector(projector);
  require_square(b, static_cast<std::size_t>(projector.rows()), "luders");
  const double p = (projector * b).trace().real();
  if (p <= tol) throw ConditioningError("luders: outcome has zero probability");
  return projector * b * projector / p;
}

StateVector luders_pure(const StateVector& psi, const CMatrix& projector, double tol) {
  require_projector(projector);
  require_square(projector, psi.dim(), "luders_pure");
  CVector phi = projector * psi.amplitudes();
  const double p = psi.amplitudes().dot(phi).real();
  if (p <= tol) throw ConditioningError("luders_pure: outcome has zero probability");
  phi /= std::sqrt(p);
  const double largest = phi.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    if (std::abs(phi(i)) >= largest - 1e-12) {
      phi *= std::conj(phi(i)) / std::abs(phi(i));
      break;
    }
  }
  return StateVector(std::move(phi));
}

EvolutionGroup hamiltonian_evolution(const SpacePtr& space, const CMatrix& h) {
  return EvolutionGroup::hamiltonian(space, h);
}

CMatrix exact_evolution(const CMatrix& h, const CMatrix& b, double t) {
  const CMatrix u = unitary_from_hamiltonian(h, t);
  return u * b * u.adjoint();
}

CMatrix liouville_integrate(const CMatrix& h, const CMatrix& b, double t, double dt) {
  if (t == 0.0) return b;
  const std::size_t steps = step_count(t, dt);
  const double step = t / static_cast<double>(steps);
  CMatrix x = b;
  for (std::size_t s = 0; s < steps; ++s) {
    const CMatrix k1 = liouville_rhs(h, x);
    const CMatrix k2 = liouville_rhs(h, x + 0.5 * step * k1);
    const CMatrix k3 = liouville_rhs(h, x + 0.5 * step * k2);
    const CMatrix k4 = liouville_rhs(h, x + step * k3);
    x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

CVector schrodinger_integrate(const CMatrix& h, const CVector& psi, double t, double dt) {
  if (t == 0.0) return psi;
  const std::size_t steps = step_count(t, dt);
  const double step = t / static_cast<double>(steps);
  const CMatrix a = cplx(0.0, -1.0) * h;
  CVector x = psi;
  for (std::size_t s = 0; s < steps; ++s) {
    const CVector k1 = a * x;
    const CVector k2 = a * (x + 0.5 * step * k1);
    const CVector k3 = a * (x + 0.5 * step * k2);
    const CVector k4 = a * (x + step * k3);
    x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace posform
