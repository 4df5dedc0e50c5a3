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

#include "posform/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "posform/classical.hpp"
#include "posform/errors.hpp"
#include "posform/quantum.hpp"

namespace posform::scenario {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& msg) {
  throw ScenarioError(ExitCode::parse, "schema error at " + where + ": " + msg);
}

[[noreturn]] void invalid(const std::string& where, const std::string& msg) {
  throw ScenarioError(ExitCode::validation, "invalid " + where + ": " + msg);
}

std::string at(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string at(const std::string& base, std::size_t index) {
  return base + "[" + std::to_string(index) + "]";
}

const Json& require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  return j;
}

const Json& require_array(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array");
  return j;
}

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) schema_error(where, "unknown field '" + item.key() + "'");
  }
}

const Json& field(const Json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing field '") + key + "'");
  return *it;
}

// The single key of a tagged union object, among `tags`.
std::string tag_of(const Json& obj, const std::string& where, std::initializer_list<const char*> tags) {
  std::string found;
  for (const char* t : tags) {
    if (obj.contains(t)) {
      if (!found.empty()) schema_error(where, "fields '" + found + "' and '" + t + "' are exclusive");
      found = t;
    }
  }
  if (found.empty()) {
    std::string list;
    for (const char* t : tags) list += (list.empty() ? "'" : ", '") + std::string(t) + "'";
    schema_error(where, "expected one of " + list);
  }
  return found;
}

double read_real(const Json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

std::int64_t read_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where, "expected an integer");
  return j.get<std::int64_t>();
}

std::size_t read_count(const Json& j, const std::string& where) {
  const std::int64_t v = read_integer(j, where);
  if (v < 1) invalid(where, "must be at least 1");
  return static_cast<std::size_t>(v);
}

std::string read_string(const Json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string");
  return j.get<std::string>();
}

cplx read_complex(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  schema_error(where, "expected a number or an [re, im] pair");
}

std::vector<double> read_reals(const Json& j, const std::string& where) {
  require_array(j, where);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_real(j[i], at(where, i)));
  return out;
}

std::vector<cplx> read_complexes(const Json& j, const std::string& where) {
  require_array(j, where);
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_complex(j[i], at(where, i)));
  return out;
}

ComplexRows read_complex_rows(const Json& j, const std::string& where) {
  require_array(j, where);
  ComplexRows out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_complexes(j[i], at(where, i)));
  return out;
}

RealRows read_real_rows(const Json& j, const std::string& where) {
  require_array(j, where);
  RealRows out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_reals(j[i], at(where, i)));
  return out;
}

ModelSpec parse_model(const Json& j, const std::string& where) {
  require_object(j, where);
  const std::string kind = read_string(field(j, where, "kind"), at(where, "kind"));
  if (kind == "classical") {
    check_keys(j, where, {"kind", "n", "mu"});
    return ClassicalModel{read_count(field(j, where, "n"), at(where, "n")),
                          read_reals(field(j, where, "mu"), at(where, "mu"))};
  }
  if (kind == "quantum") {
    check_keys(j, where, {"kind", "d"});
    return QuantumModel{read_count(field(j, where, "d"), at(where, "d"))};
  }
  schema_error(at(where, "kind"), "expected \"classical\" or \"quantum\"");
}

StateSpec parse_state(const Json& j, const std::string& where) {
  require_object(j, where);
  check_keys(j, where, {"values", "pure", "density"});
  const std::string tag = tag_of(j, where, {"values", "pure", "density"});
  if (tag == "values") return ValuesState{read_reals(j["values"], at(where, "values"))};
  if (tag == "pure") return PureState{read_complexes(j["pure"], at(where, "pure"))};
  return DensityState{read_complex_rows(j["density"], at(where, "density"))};
}

EvolutionSpec parse_evolution(const Json& j, const std::string& where) {
  require_object(j, where);
  check_keys(j, where, {"permutation", "hamiltonian"});
  const std::string tag = tag_of(j, where, {"permutation", "hamiltonian"});
  if (tag == "hamiltonian") return HamiltonianSpec{read_complex_rows(j["hamiltonian"], at(where, "hamiltonian"))};
  const std::string w = at(where, "permutation");
  const Json& cycles = require_array(j["permutation"], w);
  PermutationSpec spec;
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const Json& cycle = require_array(cycles[c], at(w, c));
    std::vector<std::size_t> points;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      points.push_back(read_count(cycle[i], at(at(w, c), i)));
    }
    spec.cycles.push_back(std::move(points));
  }
  return spec;
}

OpSpec parse_op(const Json& j, const std::string& where) {
  require_object(j, where);
  check_keys(j, where, {"kraus", "transpose", "diagonal", "matrix"});
  const std::string tag = tag_of(j, where, {"kraus", "transpose", "diagonal", "matrix"});
  if (tag == "kraus") {
    const std::string w = at(where, "kraus");
    const Json& list = require_array(j["kraus"], w);
    KrausOp op;
    for (std::size_t i = 0; i < list.size(); ++i) op.operators.push_back(read_complex_rows(list[i], at(w, i)));
    return op;
  }
  if (tag == "transpose") {
    if (!j["transpose"].is_boolean() || !j["transpose"].get<bool>()) {
      schema_error(at(where, "transpose"), "expected true");
    }
    return TransposeOp{};
  }
  if (tag == "diagonal") return DiagonalOp{read_reals(j["diagonal"], at(where, "diagonal"))};
  return MatrixOp{read_real_rows(j["matrix"], at(where, "matrix"))};
}

MeasureSpecDoc parse_measure_spec(const Json& j, const std::string& where) {
  require_object(j, where);
  const std::string tag = tag_of(j, where, {"observable", "basis", "indicator", "outcomes"});
  if (tag == "observable") {
    check_keys(j, where, {"observable"});
    return ObservableMeasure{read_complex_rows(j["observable"], at(where, "observable"))};
  }
  if (tag == "basis") {
    check_keys(j, where, {"basis", "labels"});
    BasisMeasure m;
    m.vectors = read_complex_rows(j["basis"], at(where, "basis"));
    if (j.contains("labels")) {
      const std::string w = at(where, "labels");
      const Json& labels = require_array(j["labels"], w);
      for (std::size_t i = 0; i < labels.size(); ++i) m.labels.push_back(read_string(labels[i], at(w, i)));
    } else {
      for (std::size_t i = 0; i < m.vectors.size(); ++i) m.labels.push_back(std::to_string(i));
    }
    return m;
  }
  if (tag == "indicator") {
    check_keys(j, where, {"indicator"});
    const std::string w = at(where, "indicator");
    const Json& list = require_array(j["indicator"], w);
    std::set<std::size_t> points;
    for (std::size_t i = 0; i < list.size(); ++i) points.insert(read_count(list[i], at(w, i)));
    return IndicatorMeasure{{points.begin(), points.end()}};
  }
  check_keys(j, where, {"outcomes", "parent"});
  CustomMeasure m{{}, parse_op(field(j, where, "parent"), at(where, "parent"))};
  const std::string w = at(where, "outcomes");
  const Json& list = require_array(j["outcomes"], w);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string wi = at(w, i);
    require_object(list[i], wi);
    check_keys(list[i], wi, {"label", "op"});
    m.outcomes.push_back({read_string(field(list[i], wi, "label"), at(wi, "label")),
                          parse_op(field(list[i], wi, "op"), at(wi, "op"))});
  }
  return m;
}

StepDoc parse_step(const Json& j, const std::string& where) {
  require_object(j, where);
  const std::string tag = tag_of(j, where, {"evolve", "measure"});
  if (tag == "evolve") {
    check_keys(j, where, {"evolve"});
    return EvolveStepDoc{read_real(j["evolve"], at(where, "evolve"))};
  }
  check_keys(j, where, {"measure", "spec", "outcome"});
  return MeasureStepDoc{read_string(j["measure"], at(where, "measure")),
                        parse_measure_spec(field(j, where, "spec"), at(where, "spec")),
                        read_string(field(j, where, "outcome"), at(where, "outcome"))};
}

// Dimensional consistency of a structurally valid document.

void check_square(const ComplexRows& m, std::size_t d, const std::string& where) {
  if (m.size() != d) invalid(where, "expected " + std::to_string(d) + " rows, got " + std::to_string(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != d) {
      invalid(at(where, i), "expected " + std::to_string(d) + " entries, got " + std::to_string(m[i].size()));
    }
  }
}

void check_length(std::size_t got, std::size_t want, const std::string& where) {
  if (got != want) {
    invalid(where, "expected " + std::to_string(want) + " entries, got " + std::to_string(got));
  }
}

struct Shape {
  bool quantum;
  std::size_t size;  // n or d
  std::size_t dim() const { return quantum ? size * size : size; }
};

void check_state(const StateSpec& s, const Shape& shape, const std::string& where) {
  if (const auto* v = std::get_if<ValuesState>(&s)) {
    if (shape.quantum) invalid(where, "'values' states need a classical model");
    check_length(v->values.size(), shape.size, at(where, "values"));
  } else if (const auto* p = std::get_if<PureState>(&s)) {
    if (!shape.quantum) invalid(where, "'pure' states need a quantum model");
    check_length(p->amplitudes.size(), shape.size, at(where, "pure"));
  } else {
    if (!shape.quantum) invalid(where, "'density' states need a quantum model");
    check_square(std::get<DensityState>(s).entries, shape.size, at(where, "density"));
  }
}

void check_op(const OpSpec& op, const Shape& shape, const std::string& where) {
  if (const auto* k = std::get_if<KrausOp>(&op)) {
    if (!shape.quantum) invalid(where, "Kraus operations need a quantum model");
    if (k->operators.empty()) invalid(at(where, "kraus"), "no operators");
    for (std::size_t i = 0; i < k->operators.size(); ++i) {
      check_square(k->operators[i], shape.size, at(at(where, "kraus"), i));
    }
  } else if (std::holds_alternative<TransposeOp>(op)) {
    if (!shape.quantum) invalid(where, "the transpose map needs a quantum model");
  } else if (const auto* dg = std::get_if<DiagonalOp>(&op)) {
    check_length(dg->diagonal.size(), shape.dim(), at(where, "diagonal"));
  } else {
    const RealRows& m = std::get<MatrixOp>(op).matrix;
    check_length(m.size(), shape.dim(), at(where, "matrix"));
    for (std::size_t i = 0; i < m.size(); ++i) check_length(m[i].size(), shape.dim(), at(at(where, "matrix"), i));
  }
}

void check_measure(const MeasureSpecDoc& spec, const Shape& shape, const std::string& where) {
  if (const auto* o = std::get_if<ObservableMeasure>(&spec)) {
    if (!shape.quantum) invalid(where, "observables need a quantum model");
    check_square(o->observable, shape.size, at(where, "observable"));
  } else if (const auto* b = std::get_if<BasisMeasure>(&spec)) {
    if (!shape.quantum) invalid(where, "basis measurements need a quantum model");
    check_length(b->vectors.size(), shape.size, at(where, "basis"));
    for (std::size_t i = 0; i < b->vectors.size(); ++i) {
      check_length(b->vectors[i].size(), shape.size, at(at(where, "basis"), i));
    }
    check_length(b->labels.size(), b->vectors.size(), at(where, "labels"));
  } else if (const auto* ind = std::get_if<IndicatorMeasure>(&spec)) {
    if (shape.quantum) invalid(where, "indicator measurements need a classical model");
    for (std::size_t p : ind->subset) {
      if (p > shape.size) invalid(at(where, "indicator"), "point " + std::to_string(p) + " is out of range");
    }
  } else {
    const auto& c = std::get<CustomMeasure>(spec);
    if (c.outcomes.empty()) invalid(at(where, "outcomes"), "no outcomes");
    for (std::size_t i = 0; i < c.outcomes.size(); ++i) {
      check_op(c.outcomes[i].op, shape, at(at(at(where, "outcomes"), i), "op"));
    }
    check_op(c.parent, shape, at(where, "parent"));
  }
}

void check_document(const ScenarioDoc& doc) {
  Shape shape{};
  if (const auto* c = std::get_if<ClassicalModel>(&doc.model)) {
    check_length(c->mu.size(), c->n, "model.mu");
    for (std::size_t i = 0; i < c->mu.size(); ++i) {
      if (!(c->mu[i] > 0.0)) invalid(at("model.mu", i), "measure entries must be strictly positive");
    }
    shape = {false, c->n};
  } else {
    shape = {true, std::get<QuantumModel>(doc.model).d};
  }
  check_state(doc.initial, shape, "initial");
  if (doc.post_selection) check_state(*doc.post_selection, shape, "post_selection");
  if (doc.evolution) {
    if (const auto* p = std::get_if<PermutationSpec>(&*doc.evolution)) {
      if (shape.quantum) invalid("evolution", "permutations need a classical model");
      std::set<std::size_t> seen;
      for (const auto& cycle : p->cycles) {
        for (std::size_t point : cycle) {
          if (point > shape.size) invalid("evolution.permutation", "point " + std::to_string(point) + " is out of range");
          if (!seen.insert(point).second) {
            invalid("evolution.permutation", "point " + std::to_string(point) + " appears twice");
          }
        }
      }
    } else {
      if (!shape.quantum) invalid("evolution", "Hamiltonians need a quantum model");
      check_square(std::get<HamiltonianSpec>(*doc.evolution).h, shape.size, "evolution.hamiltonian");
    }
  }
  for (std::size_t k = 0; k < doc.steps.size(); ++k) {
    const std::string where = at("steps", k);
    if (std::holds_alternative<EvolveStepDoc>(doc.steps[k])) {
      if (!doc.evolution) invalid(where, "evolve step without an evolution");
    } else {
      check_measure(std::get<MeasureStepDoc>(doc.steps[k]).spec, shape, at(where, "spec"));
    }
  }
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// Canonical text output.

std::string format_real(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) x = 0.0;  // drops the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_scalar(const OJson& j) { return !j.is_array() && !j.is_object(); }

// Nesting depth of arrays containing only scalars and arrays.
int inline_depth(const OJson& j) {
  if (is_scalar(j)) return 0;
  if (j.is_object()) return 100;
  int depth = 0;
  for (const auto& item : j) depth = std::max(depth, inline_depth(item));
  return depth + 1;
}

void write(std::ostringstream& out, const OJson& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner_pad(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_number_float()) {
    out << format_real(j.get<double>());
  } else if (is_scalar(j)) {
    out << j.dump();
  } else if (j.empty()) {
    out << (j.is_array() ? "[]" : "{}");
  } else if (j.is_array() && inline_depth(j) <= 2) {
    out << '[';
    bool first = true;
    for (const auto& item : j) {
      if (!first) out << ", ";
      first = false;
      write(out, item, indent);
    }
    out << ']';
  } else if (j.is_array()) {
    out << "[\n";
    bool first = true;
    for (const auto& item : j) {
      if (!first) out << ",\n";
      first = false;
      out << inner_pad;
      write(out, item, indent + 1);
    }
    out << '\n' << pad << ']';
  } else {
    out << "{\n";
    bool first = true;
    for (const auto& item : j.items()) {
      if (!first) out << ",\n";
      first = false;
      out << inner_pad << OJson(item.key()).dump() << ": ";
      write(out, item.value(), indent + 1);
    }
    out << '\n' << pad << '}';
  }
}

std::string canonical(const OJson& j) {
  std::ostringstream out;
  write(out, j, 0);
  out << '\n';
  return out.str();
}

OJson real(double x) { return OJson(static_cast<double>(x)); }

OJson to_json(const std::vector<double>& v) {
  OJson a = OJson::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

OJson to_json(cplx z) { return OJson::array({real(z.real()), real(z.imag())}); }

OJson to_json(const std::vector<cplx>& v) {
  OJson a = OJson::array();
  for (const cplx& z : v) a.push_back(to_json(z));
  return a;
}

OJson to_json(const ComplexRows& m) {
  OJson a = OJson::array();
  for (const auto& row : m) a.push_back(to_json(row));
  return a;
}

OJson to_json(const RealRows& m) {
  OJson a = OJson::array();
  for (const auto& row : m) a.push_back(to_json(row));
  return a;
}

OJson to_json(const StateSpec& s) {
  OJson o = OJson::object();
  if (const auto* v = std::get_if<ValuesState>(&s)) {
    o["values"] = to_json(v->values);
  } else if (const auto* p = std::get_if<PureState>(&s)) {
    o["pure"] = to_json(p->amplitudes);
  } else {
    o["density"] = to_json(std::get<DensityState>(s).entries);
  }
  return o;
}

OJson to_json(const OpSpec& op) {
  OJson o = OJson::object();
  if (const auto* k = std::get_if<KrausOp>(&op)) {
    OJson list = OJson::array();
    for (const auto& m : k->operators) list.push_back(to_json(m));
    o["kraus"] = list;
  } else if (std::holds_alternative<TransposeOp>(op)) {
    o["transpose"] = true;
  } else if (const auto* d = std::get_if<DiagonalOp>(&op)) {
    o["diagonal"] = to_json(d->diagonal);
  } else {
    o["matrix"] = to_json(std::get<MatrixOp>(op).matrix);
  }
  return o;
}

OJson to_json(const MeasureSpecDoc& spec) {
  OJson o = OJson::object();
  if (const auto* ob = std::get_if<ObservableMeasure>(&spec)) {
    o["observable"] = to_json(ob->observable);
  } else if (const auto* b = std::get_if<BasisMeasure>(&spec)) {
    OJson vectors = OJson::array();
    for (const auto& v : b->vectors) vectors.push_back(to_json(v));
    o["basis"] = vectors;
    o["labels"] = b->labels;
  } else if (const auto* ind = std::get_if<IndicatorMeasure>(&spec)) {
    o["indicator"] = ind->subset;
  } else {
    const auto& c = std::get<CustomMeasure>(spec);
    OJson outcomes = OJson::array();
    for (const auto& lo : c.outcomes) {
      OJson item = OJson::object();
      item["label"] = lo.label;
      item["op"] = to_json(lo.op);
      outcomes.push_back(item);
    }
    o["outcomes"] = outcomes;
    o["parent"] = to_json(c.parent);
  }
  return o;
}

OJson to_json(const ScenarioDoc& doc) {
  OJson o = OJson::object();
  OJson model = OJson::object();
  if (const auto* c = std::get_if<ClassicalModel>(&doc.model)) {
    model["kind"] = "classical";
    model["n"] = c->n;
    model["mu"] = to_json(c->mu);
  } else {
    model["kind"] = "quantum";
    model["d"] = std::get<QuantumModel>(doc.model).d;
  }
  o["model"] = model;
  o["initial"] = to_json(doc.initial);
  if (doc.evolution) {
    OJson ev = OJson::object();
    if (const auto* p = std::get_if<PermutationSpec>(&*doc.evolution)) {
      ev["permutation"] = p->cycles;
    } else {
      ev["hamiltonian"] = to_json(std::get<HamiltonianSpec>(*doc.evolution).h);
    }
    o["evolution"] = ev;
  }
  OJson steps = OJson::array();
  for (const auto& step : doc.steps) {
    OJson s = OJson::object();
    if (const auto* e = std::get_if<EvolveStepDoc>(&step)) {
      s["evolve"] = real(e->delta);
    } else {
      const auto& m = std::get<MeasureStepDoc>(step);
      s["measure"] = m.name;
      s["spec"] = to_json(m.spec);
      s["outcome"] = m.outcome;
    }
    steps.push_back(s);
  }
  o["steps"] = steps;
  if (doc.post_selection) o["post_selection"] = to_json(*doc.post_selection);
  if (doc.seed) o["seed"] = *doc.seed;
  return o;
}

// Conversion to runtime objects.

CMatrix to_matrix(const ComplexRows& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

CVector to_cvector(const std::vector<cplx>& v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Element to_element(const SpacePtr& space, const StateSpec& s) {
  if (const auto* v = std::get_if<ValuesState>(&s)) return Element(space, to_vector(v->values));
  if (const auto* p = std::get_if<PureState>(&s)) return from_matrix(space, pure_state(to_cvector(p->amplitudes)));
  return from_matrix(space, to_matrix(std::get<DensityState>(s).entries));
}

OperationMap to_map(const SpacePtr& space, const OpSpec& op) {
  if (const auto* k = std::get_if<KrausOp>(&op)) {
    std::vector<CMatrix> ops;
    for (const auto& m : k->operators) ops.push_back(to_matrix(m));
    return kraus_map(space, KrausSet(std::move(ops)));
  }
  if (std::holds_alternative<TransposeOp>(op)) return transpose_map(space);
  if (const auto* d = std::get_if<DiagonalOp>(&op)) {
    return OperationMap(space, to_vector(d->diagonal).asDiagonal());
  }
  const RealRows& rows = std::get<MatrixOp>(op).matrix;
  Matrix m(space->dim(), space->dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return OperationMap(space, m);
}

MeasurementSpec to_measurement(const SpacePtr& space, const MeasureStepDoc& step) {
  if (const auto* o = std::get_if<ObservableMeasure>(&step.spec)) {
    return spectral_measurement(space, to_matrix(o->observable), std::nullopt, step.name).spec;
  }
  if (const auto* b = std::get_if<BasisMeasure>(&step.spec)) {
    std::vector<CMatrix> projectors;
    for (const auto& v : b->vectors) projectors.push_back(pure_state(to_cvector(v)));
    return projective_measurement(space, projectors, b->labels, step.name);
  }
  if (const auto* ind = std::get_if<IndicatorMeasure>(&step.spec)) {
    std::vector<std::size_t> subset;
    for (std::size_t p : ind->subset) subset.push_back(p - 1);
    return indicator_measurement(space, subset, step.name);
  }
  const auto& c = std::get<CustomMeasure>(step.spec);
  std::vector<Outcome> outcomes;
  std::set<std::string> seen;
  for (const auto& lo : c.outcomes) {
    if (!seen.insert(lo.label).second) throw DomainError("duplicate outcome label '" + lo.label + "'");
    outcomes.push_back({lo.label, to_map(space, lo.op)});
  }
  return MeasurementSpec{step.name, std::move(outcomes), to_map(space, c.parent)};
}

std::string step_subject(std::size_t k, const std::string& name) {
  return "step " + std::to_string(k + 1) + " (" + name + ")";
}

// Smallest coordinate or eigenvalue of the matrix form.
double cone_margin(const Element& b) {
  if (b.space()->cone_kind() == ConeKind::psd) return min_eigenvalue(matrix_form(b));
  return b.coords().minCoeff();
}

double causality_residual(const OperationMap& m) {
  const Matrix& g = m.space()->metric();
  const Vector ge = g * m.space()->unit();
  return (m.matrix().transpose() * ge - ge).cwiseAbs().maxCoeff();
}

// Worst relative cone margin of M x over sampled cone elements x.
double sampled_positivity(const OperationMap& m, std::size_t samples, std::mt19937_64& rng) {
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Element x = sample_cone_element(m.space(), rng);
    const Element y = m.apply(x);
    const double scale = std::max(max_abs(y.coords()), max_abs(x.coords()));
    if (scale > 0.0) worst = std::min(worst, cone_margin(y) / scale);
  }
  return worst;
}

class ValidationFailed : public ScenarioError {
 public:
  explicit ValidationFailed(const std::vector<CheckResult>& checks)
      : ScenarioError(ExitCode::validation, summary(checks)) {}

 private:
  static std::string summary(const std::vector<CheckResult>& checks) {
    std::string out = "validation failed:";
    for (const auto& c : checks) {
      if (!c.passed) out += " " + c.check + " [" + c.subject + "]";
    }
    return out;
  }
};

}  // namespace

ScenarioDoc parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ScenarioError(ExitCode::parse, "syntax error at line " + std::to_string(line) + ", column " +
                                             std::to_string(column) + ": " + msg);
  }
  require_object(j, "document");
  check_keys(j, "document", {"model", "initial", "evolution", "steps", "post_selection", "seed"});
  ScenarioDoc doc{parse_model(field(j, "document", "model"), "model"),
                  parse_state(field(j, "document", "initial"), "initial"),
                  std::nullopt,
                  {},
                  std::nullopt,
                  std::nullopt};
  if (j.contains("evolution")) doc.evolution = parse_evolution(j["evolution"], "evolution");
  const Json& steps = require_array(field(j, "document", "steps"), "steps");
  for (std::size_t k = 0; k < steps.size(); ++k) doc.steps.push_back(parse_step(steps[k], at("steps", k)));
  if (j.contains("post_selection")) doc.post_selection = parse_state(j["post_selection"], "post_selection");
  if (j.contains("seed")) doc.seed = read_integer(j["seed"], "seed");
  check_document(doc);
  return doc;
}

ScenarioDoc parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(ExitCode::parse, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string serialize_scenario(const ScenarioDoc& doc) { return canonical(to_json(doc)); }

ResolvedScenario resolve(const ScenarioDoc& doc) {
  std::string where = "model";
  try {
    SpacePtr space;
    if (const auto* c = std::get_if<ClassicalModel>(&doc.model)) {
      space = make_classical_space(PhaseSpace{c->mu});
    } else {
      space = make_quantum_space(std::get<QuantumModel>(doc.model).d);
    }
    where = "initial";
    ResolvedScenario r{space, to_element(space, doc.initial), std::nullopt, {}, {}, std::nullopt};
    if (doc.post_selection) {
      where = "post_selection";
      r.post_selection = to_element(space, *doc.post_selection);
    }
    if (doc.evolution) {
      where = "evolution";
      if (const auto* p = std::get_if<PermutationSpec>(&*doc.evolution)) {
        std::vector<std::size_t> images(space->dim());
        for (std::size_t i = 0; i < images.size(); ++i) images[i] = i;
        for (const auto& cycle : p->cycles) {
          for (std::size_t i = 0; i < cycle.size(); ++i) images[cycle[i] - 1] = cycle[(i + 1) % cycle.size()] - 1;
        }
        r.evolution = permutation_evolution(space, std::move(images));
      } else {
        r.evolution = hamiltonian_evolution(space, to_matrix(std::get<HamiltonianSpec>(*doc.evolution).h));
      }
    }
    for (std::size_t k = 0; k < doc.steps.size(); ++k) {
      if (const auto* e = std::get_if<EvolveStepDoc>(&doc.steps[k])) {
        where = step_subject(k, "evolve");
        if (r.evolution->is_permutation() && e->delta != std::round(e->delta)) {
          throw DomainError("permutation evolution requires an integer time step");
        }
        r.steps.emplace_back(EvolveStep{*r.evolution, e->delta});
        continue;
      }
      const auto& m = std::get<MeasureStepDoc>(doc.steps[k]);
      where = step_subject(k, m.name);
      MeasurementSpec spec = to_measurement(space, m);
      std::optional<std::string> outcome;
      if (m.outcome != kUnobserved) {
        const auto labels = spec.labels();
        if (std::find(labels.begin(), labels.end(), m.outcome) == labels.end()) {
          std::string list;
          for (const auto& l : labels) list += (list.empty() ? "'" : ", '") + l + "'";
          throw DomainError("unknown outcome '" + m.outcome + "' (outcomes: " + list + ")");
        }
        outcome = m.outcome;
      }
      r.measurements.push_back(spec);
      r.steps.emplace_back(MeasureStep{std::move(spec), outcome});
    }
    return r;
  } catch (const Error& e) {
    throw ScenarioError(ExitCode::validation, "invalid " + where + ": " + e.what());
  }
}

std::vector<CheckResult> validate_scenario(const ScenarioDoc& doc, const Options& options) {
  return validate_scenario(doc, resolve(doc), options);
}

std::vector<CheckResult> validate_scenario(const ScenarioDoc& doc, const ResolvedScenario& resolved,
                                           const Options& options) {
  std::vector<CheckResult> out;
  const Element e = unit_element(resolved.space);
  const auto state_check = [&](const Element& b, const std::string& subject) {
    const double margin = cone_margin(b);
    out.push_back({"cone", subject, is_positive(b, options.tol) && inner(e, b) > options.tol, margin});
  };
  state_check(resolved.initial, "initial");
  if (resolved.post_selection) state_check(*resolved.post_selection, "post_selection");

  constexpr double kCompletenessTol = 1e-10;
  const bool quantum = resolved.space->cone_kind() == ConeKind::psd;
  std::mt19937_64 rng(static_cast<std::uint64_t>(doc.seed.value_or(0)));
  std::size_t m = 0;
  for (std::size_t k = 0; k < doc.steps.size(); ++k) {
    const auto* step = std::get_if<MeasureStepDoc>(&doc.steps[k]);
    if (step == nullptr) continue;
    const MeasurementSpec& spec = resolved.measurements[m++];
    const std::string subject = step_subject(k, step->name);
    const double residual = completeness_residual(spec);
    out.push_back({"completeness", subject, residual <= kCompletenessTol, residual});
    const double causality = causality_residual(spec.parent);
    out.push_back({"causality", subject, causality <= kCompletenessTol, causality});

    std::vector<std::pair<std::string, const OperationMap*>> ops;
    for (const auto& o : spec.outcomes) ops.emplace_back(subject + " outcome '" + o.label + "'", &o.map);
    ops.emplace_back(subject + " parent", &spec.parent);
    for (const auto& [name, op] : ops) {
      if (quantum) {
        const ChoiReport choi = choi_cp_check(*op);
        out.push_back({"complete_positivity", name, choi.is_cp, choi.min_eigenvalue});
      }
      const double worst = sampled_positivity(*op, options.positivity_samples, rng);
      out.push_back({"positivity", name, worst >= -options.tol, worst});
    }
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

RunReport run_scenario(const ScenarioDoc& doc, const Options& options) {
  const ResolvedScenario resolved = resolve(doc);
  std::vector<CheckResult> checks = validate_scenario(doc, resolved, options);
  if (!all_passed(checks)) throw ValidationFailed(checks);
  try {
    const Element b = normalize_state(resolved.initial, options.tol);
    SequenceResult result = run_sequence(b, resolved.steps, resolved.post_selection, options.tol);
    return RunReport{result.probability, std::move(result.per_step), std::move(result.final_state),
                     std::move(checks)};
  } catch (const ConditioningError& e) {
    throw ScenarioError(ExitCode::conditioning, e.what());
  } catch (const IncompatibleError& e) {
    throw ScenarioError(ExitCode::conditioning, e.what());
  } catch (const Error& e) {
    throw ScenarioError(ExitCode::validation, e.what());
  }
}

namespace {

OJson checks_json(const std::vector<CheckResult>& checks) {
  OJson list = OJson::array();
  for (const auto& c : checks) {
    OJson item = OJson::object();
    item["check"] = c.check;
    item["subject"] = c.subject;
    item["passed"] = c.passed;
    item["value"] = real(c.value);
    list.push_back(item);
  }
  return list;
}

OJson state_json(const Element& b) {
  OJson o = OJson::object();
  if (b.space()->cone_kind() == ConeKind::psd) {
    const CMatrix m = matrix_form(b);
    ComplexRows rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) rows[static_cast<std::size_t>(i)].push_back(m(i, j));
    }
    o["density"] = to_json(rows);
  } else {
    o["values"] = to_json(std::vector<double>(b.coords().begin(), b.coords().end()));
  }
  return o;
}

}  // namespace

std::string report_to_string(const RunReport& report) {
  OJson o = OJson::object();
  o["probability"] = real(report.probability);
  OJson steps = OJson::array();
  for (const auto& s : report.per_step) {
    OJson item = OJson::object();
    item["name"] = s.name;
    item["outcome"] = s.outcome;
    item["conditional_probability"] = real(s.conditional_probability);
    steps.push_back(item);
  }
  o["per_step"] = steps;
  o["final_state"] = state_json(report.final_state);
  o["validation"] = checks_json(report.validation);
  return canonical(o);
}

std::string validation_to_string(const std::vector<CheckResult>& checks) {
  OJson o = OJson::object();
  o["passed"] = all_passed(checks);
  o["validation"] = checks_json(checks);
  return canonical(o);
}

}  // namespace posform::scenario
