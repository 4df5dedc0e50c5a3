# Copyright 2026 The posform Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import json

import numpy as np
import pytest

import posform

ZERO = np.array([[1, 0], [0, 0]], dtype=complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def test_spaces_and_inner():
    q = posform.quantum_space(2)
    assert q.dim == 4 and q.is_quantum
    assert posform.inner(posform.unit(q), posform.unit(q)) == pytest.approx(2)
    c = posform.classical_space([1.0, 1.0])
    b = posform.Element(c, np.array([1.0, 2.0]))
    d = posform.Element(c, np.array([3.0, 4.0]))
    assert posform.inner(b, d) == pytest.approx(11)
    assert posform.leq(b, d)
    with pytest.raises(posform.DomainError):
        posform.classical_space([1.0, 0.0])


def test_born_rule_and_update():
    q = posform.quantum_space(2)
    spec = posform.spectral_measurement(q, Z, "Z")
    assert spec.labels() == ["-1", "1"]
    b = posform.from_matrix(q, PLUS)
    assert posform.predict(b, spec, "1") == pytest.approx(0.5)
    after = posform.update_state(b, spec.outcome("1"))
    assert np.allclose(posform.matrix_form(after), ZERO)
    with pytest.raises(posform.ConditioningError):
        posform.update_state(posform.from_matrix(q, ZERO), spec.outcome("-1"))


def test_choi_and_probes():
    q = posform.quantum_space(2)
    assert posform.choi_min_eigenvalue(posform.transpose_map(q)) == pytest.approx(-1)
    dephase = posform.kraus_map(q, [ZERO, np.diag([0, 1]).astype(complex)])
    assert dephase.nonselective and posform.is_completely_positive(dephase)
    probe = posform.map_to_probe(dephase, "t0", "t1")
    back = posform.probe_to_map(probe)
    assert np.allclose(back.matrix, dephase.matrix)
    t = posform.transparent_probe(q)
    x = posform.tensor(posform.from_matrix(q, ZERO), posform.from_matrix(q, ZERO))
    assert posform.pair(t, x) == pytest.approx(1)


def test_anti_lattice():
    w = posform.anti_lattice_witness(np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex))
    assert w["result"] == "witness" and w["certificates_hold"]
    assert w["dominating_bound"] is None
    assert posform.anti_lattice_witness(np.eye(2), np.eye(2))["result"] == "comparable"


def test_scenarios():
    doc = {
        "model": {"kind": "classical", "n": 3, "mu": [1, 1, 1]},
        "initial": {"values": [1, 1, 1]},
        "steps": [{"measure": "S", "spec": {"indicator": [1, 2]}, "outcome": "in"}],
    }
    report = posform.run_scenario(json.dumps(doc))
    assert report["probability"] == pytest.approx(2 / 3)
    assert np.allclose(report["final_state"].coords, [0.5, 0.5, 0])
    assert json.loads(report["text"])["per_step"][0]["outcome"] == "in"
    assert all(passed for _, _, passed, _ in posform.validate_scenario(json.dumps(doc)))
    canonical = posform.canonical_scenario(json.dumps(doc))
    assert posform.canonical_scenario(canonical) == canonical
    with pytest.raises(posform.ScenarioError) as err:
        posform.run_scenario("{}")
    assert err.value.args[1] == 2
