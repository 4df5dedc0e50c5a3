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

#include "posform/operational.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "posform/errors.hpp"

namespace posform {

const char* to_string(Selectivity s) {
  return s == Selectivity::selective ? "selective" : "nonselective";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::generic: return "generic";
    case Provenance::kraus: return "kraus";
    case Provenance::permutation: return "permutation";
    case Provenance::indicator: return "indicator";
    case Provenance::unitary: return "unitary";
    case Provenance::evolution: return "evolution";
  }
  return "generic";
}

OperationMap::OperationMap(SpacePtr space, Matrix matrix, Selectivity selectivity,
                           Provenance provenance)
    : space_(std::move(space)),
      matrix_(std::move(matrix)),
      selectivity_(selectivity),
      provenance_(provenance) {
  if (!space_) throw DimensionError("OperationMap: null space");
  const auto n = static_cast<Eigen::Index>(space_->dim());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionError("OperationMap: matrix shape does not match space '" + space_->id() + "'");
  }
}

Element OperationMap::apply(const Element& b) const {
  if (!same_space(*space_, *b.space())) {
    throw DimensionError("OperationMap::apply: space mismatch ('" + space_->id() + "' vs '" +
                         b.space()->id() + "')");
  }
  return {space_, matrix_ * b.coords()};
}

Element OperationMap::apply_adjoint(const Element& c) const {
  if (!same_space(*space_, *c.space())) {
    throw DimensionError("OperationMap::apply_adjoint: space mismatch");
  }
  if (space_->metric_is_identity()) return {space_, matrix_.transpose() * c.coords()};
  const Matrix& g = space_->metric();
  return {space_, g.ldlt().solve(matrix_.transpose() * (g * c.coords()))};
}

OperationMap identity_map(const SpacePtr& space) {
  const auto n = static_cast<Eigen::Index>(space->dim());
  return {space, Matrix::Identity(n, n), Selectivity::nonselective, Provenance::generic};
}

OperationMap then(const OperationMap& before, const OperationMap& after) {
  if (!same_space(*before.space(), *after.space())) {
    throw DimensionError("then: operations act on different spaces");
  }
  const bool nonselective = before.selectivity() == Selectivity::nonselective &&
                            after.selectivity() == Selectivity::nonselective;
  return {before.space(), after.matrix() * before.matrix(),
          nonselective ? Selectivity::nonselective : Selectivity::selective, Provenance::generic};
}

bool is_nonselective(const OperationMap& m, double tol) {
  const SpacePtr& space = m.space();
  const Vector ge = space->metric() * space->unit();
  return max_abs(Vector(m.matrix().transpose() * ge - ge)) <= tol;
}

bool is_positive_map(const OperationMap& m, std::size_t samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    if (!is_positive(m.apply(sample_cone_element(m.space(), rng)), tol)) return false;
  }
  return true;
}

const OperationMap& MeasurementSpec::outcome(const std::string& label) const {
  for (const Outcome& o : outcomes) {
    if (o.label == label) return o.map;
  }
  throw DomainError("measurement '" + name + "': unknown outcome label '" + label + "'");
}

std::vector<std::string> MeasurementSpec::labels() const {
  std::vector<std::string> out;
  out.reserve(outcomes.size());
  for (const Outcome& o : outcomes) out.push_back(o.label);
  return out;
}

double completeness_residual(const MeasurementSpec& spec) {
  Matrix sum = Matrix::Zero(spec.parent.matrix().rows(), spec.parent.matrix().cols());
  for (const Outcome& o : spec.outcomes) {
    if (!same_space(*o.map.space(), *spec.parent.space())) {
      throw DimensionError("measurement '" + spec.name + "': outcome '" + o.label +
                           "' acts on a different space");
    }
    sum += o.map.matrix();
  }
  return max_abs(Matrix(sum - spec.parent.matrix()));
}

double conditioned_probability(const Element& b1, const Element& b2, const OperationMap& m_a,
                               const OperationMap& m_star, double tol) {
  const double denominator = inner(b2, m_star.apply(b1));
  if (denominator <= tol) {
    throw IncompatibleError("conditioned_probability: post-selection incompatible with the setup");
  }
  return inner(b2, m_a.apply(b1)) / denominator;
}

double predict(const Element& b, const MeasurementSpec& spec, const std::string& label, double tol) {
  const Element e = unit_element(b.space());
  if (std::abs(inner(e, b) - 1.0) > tol) throw DomainError("predict: state is not normalized");
  if (!is_nonselective(spec.parent)) {
    throw DomainError("predict: parent of measurement '" + spec.name + "' is not non-selective");
  }
  return inner(e, spec.outcome(label).apply(b));
}

Element update_state(const Element& b, const OperationMap& m_a, double tol) {
  const Element image = m_a.apply(b);
  const double p = inner(unit_element(b.space()), image);
  if (p <= tol) throw ConditioningError("update_state: outcome has zero probability");
  return image * (1.0 / p);
}

EvolutionGroup::EvolutionGroup(SpacePtr space, std::variant<Permutation, Hamiltonian> kind)
    : space_(std::move(space)), kind_(std::move(kind)) {}

EvolutionGroup EvolutionGroup::permutation(SpacePtr space, std::vector<std::size_t> images) {
  const std::size_t n = space->dim();
  if (space->cone_kind() != ConeKind::componentwise) {
    throw DomainError("permutation evolution requires a classical space");
  }
  if (images.size() != n) throw DimensionError("permutation: expected " + std::to_string(n) + " images");
  std::vector<bool> hit(n, false);
  for (std::size_t i : images) {
    if (i >= n || hit[i]) throw DomainError("permutation: not a bijection");
    hit[i] = true;
  }
  Matrix t = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) t(static_cast<Eigen::Index>(images[i]), static_cast<Eigen::Index>(i)) = 1.0;
  const Matrix& g = space->metric();
  const double scale = std::max(1.0, max_abs(g));
  if (max_abs(Matrix(t.transpose() * g * t - g)) > 1e-12 * scale ||
      max_abs(Vector(t * space->unit() - space->unit())) > 1e-12 * max_abs(space->unit())) {
    throw DomainError("permutation: measure is not invariant under the bijection");
  }
  return EvolutionGroup(std::move(space), Permutation{std::move(images)});
}

EvolutionGroup EvolutionGroup::hamiltonian(SpacePtr space, CMatrix h) {
  if (space->cone_kind() != ConeKind::psd || space->factors().size() != 1) {
    throw DomainError("hamiltonian evolution requires a single-factor quantum space");
  }
  const auto d = static_cast<Eigen::Index>(space->psd_size());
  if (h.rows() != d || h.cols() != d) throw DimensionError("hamiltonian: H has the wrong size");
  if (!is_hermitian(h, 1e-12 * std::max(1.0, max_abs(h)))) {
    throw DomainError("hamiltonian: H is not Hermitian");
  }
  HermitianEigen eig = eigh(h);
  return EvolutionGroup(std::move(space), Hamiltonian{std::move(h), std::move(eig)});
}

namespace {

std::vector<std::size_t> compose_perm(const std::vector<std::size_t>& outer,
                                      const std::vector<std::size_t>& inner_perm) {
  std::vector<std::size_t> out(inner_perm.size());
  for (std::size_t i = 0; i < inner_perm.size(); ++i) out[i] = outer[inner_perm[i]];
  return out;
}

std::vector<std::size_t> perm_power(std::vector<std::size_t> base, std::int64_t exponent) {
  if (exponent < 0) {
    std::vector<std::size_t> inv(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) inv[base[i]] = i;
    base = std::move(inv);
    exponent = -exponent;
  }
  std::vector<std::size_t> result(base.size());
  for (std::size_t i = 0; i < result.size(); ++i) result[i] = i;
  while (exponent > 0) {
    if (exponent & 1) result = compose_perm(base, result);
    base = compose_perm(base, base);
    exponent >>= 1;
  }
  return result;
}

}  // namespace

OperationMap EvolutionGroup::map(double delta) const {
  const auto n = static_cast<Eigen::Index>(space_->dim());
  if (const auto* perm = std::get_if<Permutation>(&kind_)) {
    if (std::floor(delta) != delta || std::abs(delta) > 9.0e15) {
      throw DomainError("permutation evolution requires an integer time step");
    }
    const std::vector<std::size_t> v = perm_power(perm->images, static_cast<std::int64_t>(delta));
    // (T b)(v(i)) = b(i), i.e. b o v^-1.
    Matrix t = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < v.size(); ++i) t(static_cast<Eigen::Index>(v[i]), static_cast<Eigen::Index>(i)) = 1.0;
    return {space_, std::move(t), Selectivity::nonselective, Provenance::permutation};
  }
  const CMatrix u = unitary(delta);
  const auto& basis = space_->factor_bases()[0];
  Matrix m(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    const CMatrix image = u * basis[static_cast<std::size_t>(l)] * u.adjoint();
    for (Eigen::Index k = 0; k < n; ++k) {
      m(k, l) = (basis[static_cast<std::size_t>(k)] * image).trace().real();
    }
  }
  return {space_, std::move(m), Selectivity::nonselective, Provenance::evolution};
}

CMatrix EvolutionGroup::unitary(double delta) const {
  const auto* ham = std::get_if<Hamiltonian>(&kind_);
  if (ham == nullptr) throw DomainError("unitary: not a Hamiltonian evolution group");
  CVector phases(ham->eig.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::exp(cplx(0.0, -delta * ham->eig.values(k)));
  }
  return ham->eig.vectors * phases.asDiagonal() * ham->eig.vectors.adjoint();
}

Element evolve(const EvolutionGroup& group, double delta, const Element& b) {
  if (delta == 0.0) return b;
  return group.map(delta).apply(b);
}

SequenceResult run_sequence(const Element& b, const std::vector<SequenceStep>& steps,
                            const std::optional<Element>& post_selection, double tol) {
  const SpacePtr& space = b.space();
  const Element e = unit_element(space);
  if (std::abs(inner(e, b) - 1.0) > tol) throw DomainError("run_sequence: initial state is not normalized");

  // Evolution maps are materialized once; measure steps point into `steps`.
  std::vector<OperationMap> evolutions;
  evolutions.reserve(steps.size());
  struct View {
    const OperationMap* selected;
    const OperationMap* parent;
    bool is_measure;
    bool observed;
    std::string name;
    std::string outcome;
  };
  std::vector<View> views;
  views.reserve(steps.size());
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (const auto* m = std::get_if<MeasureStep>(&steps[k])) {
      if (!is_nonselective(m->spec.parent)) {
        throw DomainError("run_sequence: parent of measurement '" + m->spec.name +
                          "' is not non-selective");
      }
      const OperationMap* selected = m->outcome ? &m->spec.outcome(*m->outcome) : &m->spec.parent;
      views.push_back({selected, &m->spec.parent, true, m->outcome.has_value(), m->spec.name,
                       m->outcome.value_or("unobserved")});
    } else {
      const auto& ev = std::get<EvolveStep>(steps[k]);
      evolutions.push_back(ev.group.map(ev.delta));
      views.push_back({&evolutions.back(), &evolutions.back(), false, false, "evolve", ""});
    }
  }

  const auto step_label = [&](std::size_t k) {
    return "step " + std::to_string(k + 1) + " (" + views[k].name + ")";
  };

  // Forward chain: normalized running state c_k and prefix masses s_k.
  std::vector<Element> states{b};
  std::vector<double> masses;
  states.reserve(views.size() + 1);
  masses.reserve(views.size());
  for (std::size_t k = 0; k < views.size(); ++k) {
    const Element image = views[k].selected->apply(states.back());
    const double s = inner(e, image);
    if (s <= tol) {
      throw ConditioningError(step_label(k) + ": outcome '" + views[k].outcome +
                              "' has zero probability");
    }
    masses.push_back(s);
    states.push_back(image * (1.0 / s));
  }

  SequenceResult result{1.0, states.back(), {}};
  if (!post_selection) {
    for (std::size_t k = 0; k < views.size(); ++k) {
      result.probability *= masses[k];
      if (views[k].is_measure) result.per_step.push_back({views[k].name, views[k].outcome, masses[k]});
    }
    return result;
  }

  const Element& b2 = *post_selection;
  require_same_space(b, b2, "run_sequence");
  // Backward chain: w_k = P_{k+1}^+ ... P_n^+ b2.
  std::vector<Element> backward(views.size() + 1, b2);
  for (std::size_t k = views.size(); k-- > 0;) {
    backward[k] = views[k].parent->apply_adjoint(backward[k + 1]);
  }
  const double denominator = inner(backward[0], b);
  if (denominator <= tol) {
    throw IncompatibleError("run_sequence: post-selected state is incompatible with the sequence");
  }
  double cumulative = 1.0;
  double previous = 1.0;
  for (std::size_t k = 0; k < views.size(); ++k) {
    cumulative *= masses[k];
    const double prefix = cumulative * inner(backward[k + 1], states[k + 1]) / denominator;
    if (!views[k].is_measure) {
      previous = prefix;
      continue;
    }
    if (views[k].observed && prefix <= tol) {
      throw ConditioningError(step_label(k) + ": outcome '" + views[k].outcome +
                              "' has zero probability under post-selection");
    }
    result.per_step.push_back({views[k].name, views[k].outcome, prefix / previous});
    previous = prefix;
  }
  result.probability = previous;
  return result;
}

}  // namespace posform
