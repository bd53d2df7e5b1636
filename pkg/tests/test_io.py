import json
import math

import numpy as np
import pytest

from wehrl import io as wio
from wehrl.dynamics import SpinHamiltonian
from wehrl.entropy import coherent_closed_forms, measure_report, renyi_entropy
from wehrl.spin import StellarRoots, coherent_state, roots_from_state, state_from_roots


def test_state_round_trip_is_exact(random_states, tmp_path):
    for st in random_states:
        path = tmp_path / "s.json"
        wio.save_json(wio.state_to_dict(st), path)
        back = wio.load_state(path)
        assert back.twice_j == st.twice_j
        np.testing.assert_array_equal(back.coeffs, st.coeffs)


def test_roots_record_loads_as_state(random_states):
    st = random_states[3]
    r = roots_from_state(st)
    d = json.loads(wio.dumps(wio.roots_to_dict(r)))
    back = wio.state_from_dict(d)
    assert abs(abs(np.vdot(back.coeffs / np.linalg.norm(back.coeffs),
                           st.coeffs / np.linalg.norm(st.coeffs))) - 1) < 1e-10
    r2 = wio.roots_from_dict(d)
    np.testing.assert_array_equal(r2.finite_roots, r.finite_roots)


def test_hamiltonian_round_trip():
    h = SpinHamiltonian.random(3, 2)
    back = wio.hamiltonian_from_dict(json.loads(wio.dumps(wio.hamiltonian_to_dict(h))))
    np.testing.assert_array_equal(back.matrix, h.matrix)


@pytest.mark.parametrize("record", [
    [1, 2],
    {"twice_j": 1.5, "coeffs": [[1, 0], [0, 0]]},
    {"twice_j": 2, "coeffs": [[1, 0], [0, 0]]},
    {"twice_j": 1, "coeffs": [[1, 0, 3], [0, 0, 1]]},
    {"twice_j": 1, "coeffs": [[0, 0], [0, 0]]},
    {"twice_j": 1, "coeffs": [["a", 0], [0, 0]]},
    {"twice_j": 1, "coeffs": [[float("nan"), 0], [1, 0]]},
    {"twice_j": 1},
    {"twice_j": 2, "finite_roots": [[0, 0]], "roots_at_infinity": 0},
])
def test_bad_state_records(record):
    with pytest.raises(wio.FormatError):
        wio.state_from_dict(record)


def test_bad_hamiltonian_records():
    with pytest.raises(wio.FormatError):
        wio.hamiltonian_from_dict({"twice_j": 1, "matrix": [[[1, 0]]]})
    with pytest.raises(wio.FormatError):
        wio.hamiltonian_from_dict({"twice_j": 1, "matrix": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]})


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(wio.FormatError):
        wio.load_state(p)


def test_non_finite_values_serialise():
    text = wio.dumps({"a": math.nan, "b": [math.inf, -math.inf], "c": np.float64(0.1)})
    assert json.loads(text) == {"a": "nan", "b": ["inf", "-inf"], "c": 0.1}


def test_float_format_round_trips():
    for x in (0.1, 1 / 3, 2.0 ** -1074, 1.7976931348623157e308, -5 / 3 + math.log(2)):
        assert float(wio.format_float(x)) == x
    assert wio.format_float(3) == "3"
    assert wio.format_float(None) == ""


def test_csv_metadata_and_rows():
    rep = measure_report(coherent_state(0, 2), [1.0, 2.0])
    rows = wio.report_rows(rep, "c")
    meta = {"version": "x", "config_hash": "abc", "seed": 4, "runtime_s": 0.5}
    text = wio.csv_text(rows, wio.REPORT_COLUMNS, meta)
    lines = text.splitlines()
    assert lines[0] == "# version: x"
    assert lines[3].startswith("# runtime_s")
    m, back = wio.read_csv(text)
    assert m["seed"] == "4" and m["config_hash"] == "abc"
    assert [r["q"] for r in back] == ["1", "2"]
    assert float(back[1]["W"]) == rep.W[2.0]
    assert float(back[0]["S"]) == rep.S[1.0]


def test_config_hash_is_order_independent():
    assert wio.config_hash({"a": 1, "b": [1.5, 2]}) == wio.config_hash({"b": [1.5, 2], "a": 1})
    assert wio.config_hash({"a": 1}) != wio.config_hash({"a": 2})


@pytest.mark.parametrize("tj", sorted(wio.PLATONIC))
def test_platonic_fixtures(tj):
    r = wio.platonic_roots(tj)
    assert isinstance(r, StellarRoots) and r.twice_j == tj
    v = r.unit_vectors()
    np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1.0, atol=1e-12)
    # vertices of a Platonic solid balance and are equidistant from their nearest neighbours
    np.testing.assert_allclose(v.sum(axis=0), 0.0, atol=1e-12)
    d = np.linalg.norm(v[:, None] - v[None], axis=-1)
    nearest = np.sort(d, axis=1)[:, 1]
    np.testing.assert_allclose(nearest, nearest[0], rtol=1e-10)
    # these states are more delocalised than coherent states
    st = state_from_roots(r)
    assert renyi_entropy(st, 1.0) > coherent_closed_forms(tj, 1).S[1.0]


def test_platonic_unknown():
    with pytest.raises(ValueError):
        wio.platonic_roots(5)
