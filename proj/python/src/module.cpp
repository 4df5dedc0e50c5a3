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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "posform/classical.hpp"
#include "posform/errors.hpp"
#include "posform/lattice.hpp"
#include "posform/operational.hpp"
#include "posform/ordered_space.hpp"
#include "posform/probes.hpp"
#include "posform/quantum.hpp"
#include "posform/scenario.hpp"

namespace py = pybind11;
using namespace posform;

namespace {

py::dict witness_dict(const AntiLatticeResult& r) {
  py::dict out;
  if (const auto* c = std::get_if<ComparableReport>(&r)) {
    out["result"] = "comparable";
    out["verdict"] = to_string(c->verdict);
    return out;
  }
  const auto& w = std::get<AntiLatticeWitness>(r);
  out["result"] = "witness";
  out["c1"] = w.c1;
  out["c2"] = w.c2;
  out["certificates_hold"] = w.certificates_hold;
  out["grid_lower_bounds"] = w.grid_lower_bounds;
  out["dominating_bound"] = w.dominating_bound ? py::cast(*w.dominating_bound) : py::none();
  return out;
}

py::dict report_dict(const scenario::RunReport& r) {
  py::list steps;
  for (const auto& s : r.per_step) {
    py::dict d;
    d["name"] = s.name;
    d["outcome"] = s.outcome;
    d["conditional_probability"] = s.conditional_probability;
    steps.append(d);
  }
  py::dict out;
  out["probability"] = r.probability;
  out["per_step"] = steps;
  out["final_state"] = r.final_state;
  out["text"] = scenario::report_to_string(r);
  return out;
}

}  // namespace

PYBIND11_MODULE(_posform, m) {
  m.doc() = "Ordered vector spaces, operations and scenarios for classical and quantum models";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ZeroStateError>(m, "ZeroStateError", base.ptr());
  py::register_exception<ConditioningError>(m, "ConditioningError", base.ptr());
  py::register_exception<IncompatibleError>(m, "IncompatibleError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  static py::exception<scenario::ScenarioError> scenario_error(m, "ScenarioError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const scenario::ScenarioError& e) {
      PyErr_SetObject(scenario_error.ptr(), py::make_tuple(e.what(), static_cast<int>(e.code())).ptr());
    }
  });

  py::class_<ModelSpace, std::shared_ptr<ModelSpace>>(m, "ModelSpace")
      .def_property_readonly("id", &ModelSpace::id)
      .def_property_readonly("dim", &ModelSpace::dim)
      .def_property_readonly("metric", &ModelSpace::metric)
      .def_property_readonly("unit", &ModelSpace::unit)
      .def_property_readonly("is_quantum", [](const ModelSpace& s) { return s.cone_kind() == ConeKind::psd; })
      .def("__repr__", [](const ModelSpace& s) { return "<ModelSpace " + s.id() + ">"; });

  py::class_<Element>(m, "Element")
      .def(py::init([](std::shared_ptr<ModelSpace> s, Vector coords) { return Element(std::move(s), std::move(coords)); }),
           py::arg("space"), py::arg("coords"))
      .def_property_readonly("space", [](const Element& e) { return std::const_pointer_cast<ModelSpace>(e.space()); })
      .def_property_readonly("coords", &Element::coords)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * double())
      .def(double() * py::self);

  py::class_<OperationMap>(m, "OperationMap")
      .def_property_readonly("matrix", &OperationMap::matrix)
      .def_property_readonly("nonselective",
                             [](const OperationMap& o) { return o.selectivity() == Selectivity::nonselective; })
      .def("__call__", &OperationMap::apply)
      .def("adjoint", &OperationMap::apply_adjoint);

  py::class_<MeasurementSpec>(m, "MeasurementSpec")
      .def_readonly("name", &MeasurementSpec::name)
      .def_readonly("parent", &MeasurementSpec::parent)
      .def("labels", &MeasurementSpec::labels)
      .def("outcome", &MeasurementSpec::outcome, py::return_value_policy::reference_internal);

  py::class_<ProbeFunctional>(m, "ProbeFunctional")
      .def_property_readonly("coeffs", &ProbeFunctional::coeffs)
      .def_property_readonly("labels", [](const ProbeFunctional& p) {
        std::vector<std::string> out;
        for (const auto& f : p.boundary()) out.push_back(f.label);
        return out;
      });

  m.def("classical_space", [](std::vector<double> mu) { return std::const_pointer_cast<ModelSpace>(make_classical_space(PhaseSpace{std::move(mu)})); },
        py::arg("mu"));
  m.def("quantum_space", [](std::size_t d) { return std::const_pointer_cast<ModelSpace>(make_quantum_space(d)); }, py::arg("d"));
  m.def("unit", [](std::shared_ptr<ModelSpace> s) { return unit_element(s); });
  m.def("from_matrix", [](std::shared_ptr<ModelSpace> s, const CMatrix& x) { return from_matrix(s, x); });
  m.def("matrix_form", &matrix_form);
  m.def("inner", &inner);
  m.def("is_positive", &is_positive, py::arg("b"), py::arg("tol") = kDefaultTol);
  m.def("leq", &leq, py::arg("b"), py::arg("c"), py::arg("tol") = kDefaultTol);
  m.def("order_unit_lambda", &order_unit_lambda, py::arg("b"), py::arg("tol") = kDefaultTol);
  m.def("normalize_state", &normalize_state, py::arg("b"), py::arg("tol") = kDefaultTol);
  m.def("tensor", &tensor_element);

  m.def("kraus_map", [](std::shared_ptr<ModelSpace> s, std::vector<CMatrix> ops) { return kraus_map(s, KrausSet(std::move(ops))); });
  m.def("transpose_map", [](std::shared_ptr<ModelSpace> s) { return transpose_map(s); });
  m.def("choi_min_eigenvalue", [](const OperationMap& op) { return choi_cp_check(op).min_eigenvalue; });
  m.def("is_completely_positive", [](const OperationMap& op) { return choi_cp_check(op).is_cp; });
  m.def("spectral_measurement",
        [](std::shared_ptr<ModelSpace> s, const CMatrix& a, std::string name) { return spectral_measurement(s, a, std::nullopt, std::move(name)).spec; },
        py::arg("space"), py::arg("observable"), py::arg("name") = "observable");
  m.def("indicator_measurement",
        [](std::shared_ptr<ModelSpace> s, std::vector<std::size_t> subset, std::string name) { return indicator_measurement(s, subset, std::move(name)); },
        py::arg("space"), py::arg("subset"), py::arg("name") = "indicator");
  m.def("predict", &predict, py::arg("b"), py::arg("spec"), py::arg("label"), py::arg("tol") = kDefaultTol);
  m.def("update_state", &update_state, py::arg("b"), py::arg("op"), py::arg("tol") = kDefaultTol);
  m.def("evolve_hamiltonian", [](const Element& b, const CMatrix& h, double t) { return evolve(hamiltonian_evolution(b.space(), h), t, b); });

  m.def("map_to_probe", &map_to_probe, py::arg("op"), py::arg("in_label") = "in", py::arg("out_label") = "out");
  m.def("probe_to_map", &probe_to_map);
  m.def("transparent_probe", [](std::shared_ptr<ModelSpace> s) { return transparent_probe(s); });
  m.def("pair", &pair);
  m.def("compose", [](const ProbeFunctional& p, const ProbeFunctional& q, const std::string& label) { return compose(p, q, label); });

  m.def("classify_order", [](const Element& b, const Element& c, double tol) { return std::string(to_string(classify_order(b, c, tol).verdict)); },
        py::arg("b"), py::arg("c"), py::arg("tol") = kDefaultTol);
  m.def("anti_lattice_witness", [](const CMatrix& a, const CMatrix& b) { return witness_dict(anti_lattice_witness(a, b)); });
  m.def("meet", &meet);
  m.def("join", &join);

  m.def("run_scenario", [](const std::string& text, double tol) {
    scenario::Options options;
    options.tol = tol;
    return report_dict(scenario::run_scenario(scenario::parse_scenario_text(text), options));
  }, py::arg("text"), py::arg("tol") = kDefaultTol);
  m.def("validate_scenario", [](const std::string& text) {
    const auto checks = scenario::validate_scenario(scenario::parse_scenario_text(text));
    py::list out;
    for (const auto& c : checks) out.append(py::make_tuple(c.check, c.subject, c.passed, c.value));
    return out;
  });
  m.def("canonical_scenario", [](const std::string& text) { return scenario::serialize_scenario(scenario::parse_scenario_text(text)); });
}
