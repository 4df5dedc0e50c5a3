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

// Declarative scenario documents: parsing, canonical serialization,
// validation and execution.
//
// A scenario is a JSON document with top-level keys
//   model           {"kind": "quantum", "d": 2} | {"kind": "classical", "n": 3, "mu": [...]}
//   initial         state spec
//   evolution       optional, {"permutation": [[1, 2], ...]} | {"hamiltonian": cmatrix}
//   steps           [{"evolve": 0.5} | {"measure": name, "spec": {...}, "outcome": label}]
//   post_selection  optional state spec
//   seed            optional integer (sampled diagnostics)
// State specs are {"values": [...]}, {"pure": cvector} or {"density": cmatrix}.
// Complex entries are [re, im] pairs (a bare number is accepted as real).
// Phase-space indices are 1-based. Measurement specs are
//   {"observable": cmatrix}
//   {"basis": [cvector, ...], "labels": [...]}
//   {"indicator": [i, ...]}
//   {"outcomes": [{"label": l, "op": op}, ...], "parent": op}
// with op one of {"kraus": [cmatrix, ...]}, {"transpose": true},
// {"diagonal": [...]}, {"matrix": [[...], ...]} (storage coordinates).
// The outcome "unobserved" applies the parent.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "posform/linalg.hpp"
#include "posform/operational.hpp"
#include "posform/ordered_space.hpp"

namespace posform::scenario {

using ComplexRows = std::vector<std::vector<cplx>>;
using RealRows = std::vector<std::vector<double>>;

struct ClassicalModel {
  std::size_t n;
  std::vector<double> mu;
  bool operator==(const ClassicalModel&) const = default;
};
struct QuantumModel {
  std::size_t d;
  bool operator==(const QuantumModel&) const = default;
};
using ModelSpec = std::variant<ClassicalModel, QuantumModel>;

struct ValuesState {
  std::vector<double> values;
  bool operator==(const ValuesState&) const = default;
};
struct PureState {
  std::vector<cplx> amplitudes;
  bool operator==(const PureState&) const = default;
};
struct DensityState {
  ComplexRows entries;
  bool operator==(const DensityState&) const = default;
};
using StateSpec = std::variant<ValuesState, PureState, DensityState>;

struct PermutationSpec {
  std::vector<std::vector<std::size_t>> cycles;  // 1-based
  bool operator==(const PermutationSpec&) const = default;
};
struct HamiltonianSpec {
  ComplexRows h;
  bool operator==(const HamiltonianSpec&) const = default;
};
using EvolutionSpec = std::variant<PermutationSpec, HamiltonianSpec>;

struct KrausOp {
  std::vector<ComplexRows> operators;
  bool operator==(const KrausOp&) const = default;
};
struct TransposeOp {
  bool operator==(const TransposeOp&) const = default;
};
struct DiagonalOp {
  std::vector<double> diagonal;
  bool operator==(const DiagonalOp&) const = default;
};
struct MatrixOp {
  RealRows matrix;
  bool operator==(const MatrixOp&) const = default;
};
using OpSpec = std::variant<KrausOp, TransposeOp, DiagonalOp, MatrixOp>;

struct ObservableMeasure {
  ComplexRows observable;
  bool operator==(const ObservableMeasure&) const = default;
};
struct BasisMeasure {
  std::vector<std::vector<cplx>> vectors;
  std::vector<std::string> labels;
  bool operator==(const BasisMeasure&) const = default;
};
struct IndicatorMeasure {
  std::vector<std::size_t> subset;  // 1-based, sorted, unique
  bool operator==(const IndicatorMeasure&) const = default;
};
struct LabelledOp {
  std::string label;
  OpSpec op;
  bool operator==(const LabelledOp&) const = default;
};
struct CustomMeasure {
  std::vector<LabelledOp> outcomes;
  OpSpec parent;
  bool operator==(const CustomMeasure&) const = default;
};
using MeasureSpecDoc = std::variant<ObservableMeasure, BasisMeasure, IndicatorMeasure, CustomMeasure>;

inline constexpr const char* kUnobserved = "unobserved";

struct EvolveStepDoc {
  double delta;
  bool operator==(const EvolveStepDoc&) const = default;
};
struct MeasureStepDoc {
  std::string name;
  MeasureSpecDoc spec;
  std::string outcome;  // a label or "unobserved"
  bool operator==(const MeasureStepDoc&) const = default;
};
using StepDoc = std::variant<EvolveStepDoc, MeasureStepDoc>;

struct ScenarioDoc {
  ModelSpec model;
  StateSpec initial;
  std::optional<EvolutionSpec> evolution;
  std::vector<StepDoc> steps;
  std::optional<StateSpec> post_selection;
  std::optional<std::int64_t> seed;
  bool operator==(const ScenarioDoc&) const = default;
};

/// CLI exit codes.
enum class ExitCode : int { ok = 0, parse = 2, validation = 3, conditioning = 4, internal = 5 };

/// Parse, schema and validation failures of scenario input.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

/// Parses and checks a document: syntax errors carry line and column,
/// unknown or missing fields are schema errors (both ExitCode::parse);
/// dimension mismatches and out-of-range values are ExitCode::validation.
ScenarioDoc parse_scenario_text(const std::string& text);
ScenarioDoc parse_scenario(const std::filesystem::path& path);

/// Canonical serialization: fixed key order, reals at 17 significant digits.
std::string serialize_scenario(const ScenarioDoc& doc);

/// Runtime objects built from a document.
struct ResolvedScenario {
  SpacePtr space;
  Element initial;  // as given, not normalized
  std::optional<EvolutionGroup> evolution;
  std::vector<MeasurementSpec> measurements;  // one per measure step, in order
  std::vector<SequenceStep> steps;
  std::optional<Element> post_selection;
};

/// Throws ScenarioError(validation) when the document cannot be turned into
/// operators (bad projectors, non-Hermitian H, non-integer permutation
/// steps, unknown outcome labels, ...).
ResolvedScenario resolve(const ScenarioDoc& doc);

struct CheckResult {
  std::string check;
  std::string subject;
  bool passed;
  double value;
};

struct Options {
  double tol = kDefaultTol;
  std::size_t positivity_samples = 256;
};

/// Every check is reported; any failure makes the scenario unrunnable.
/// Checks: cone membership of the initial and post-selected states;
/// completeness and causality of each measurement; complete positivity
/// (Choi) of quantum operations; sampled positivity of every operation.
std::vector<CheckResult> validate_scenario(const ScenarioDoc& doc, const Options& options = {});
std::vector<CheckResult> validate_scenario(const ScenarioDoc& doc, const ResolvedScenario& resolved,
                                           const Options& options = {});

bool all_passed(const std::vector<CheckResult>& checks);

struct RunReport {
  double probability;
  std::vector<StepRecord> per_step;
  Element final_state;
  std::vector<CheckResult> validation;
};

/// Validates, then runs the sequence from the normalized initial state.
/// Throws ScenarioError(validation) when a check fails and
/// ScenarioError(conditioning) naming the step on a zero-probability
/// outcome.
RunReport run_scenario(const ScenarioDoc& doc, const Options& options = {});

std::string report_to_string(const RunReport& report);
std::string validation_to_string(const std::vector<CheckResult>& checks);

}  // namespace posform::scenario
