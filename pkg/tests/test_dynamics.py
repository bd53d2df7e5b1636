import math

import numpy as np
import pytest
from scipy.linalg import expm

from wehrl.dynamics import (
    SpinHamiltonian, bargmann_time_derivative, entropy_rate, evolve, extremality_report,
    finite_difference_rate, generators, husimi_second_time_derivative, husimi_time_derivative,
    measure_value, moment_second_derivative, spin_matrix, time_series,
)
from wehrl.ensemble import haar_random_state
from wehrl.spin import (
    Rotation, amplitudes_from_state, bargmann_eval, coherent_state, husimi_eval, rotate_state,
    state_from_amplitudes,
)


def same_up_to_phase(a, b, tol=1e-10):
    return abs(abs(np.vdot(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) < tol


# ---------------------------------------------------------------------------
# operators


@pytest.mark.parametrize("tj", [1, 2, 5])
def test_generators_commutation(tj):
    g = generators(tj)
    jz, jp, jm = g["Jz"], g["Jplus"], g["Jminus"]
    np.testing.assert_allclose(jz @ jp - jp @ jz, jp, atol=1e-13)
    np.testing.assert_allclose(jp @ jm - jm @ jp, 2 * jz, atol=1e-13)
    j = tj / 2
    casimir = jz @ jz + 0.5 * (jp @ jm + jm @ jp)
    np.testing.assert_allclose(casimir, j * (j + 1) * np.eye(tj + 1), atol=1e-12)


def test_hamiltonian_validation():
    with pytest.raises(ValueError):
        SpinHamiltonian(2, np.ones((2, 2)))
    with pytest.raises(ValueError):
        SpinHamiltonian(1, np.array([[0, 1], [0, 0]]))
    h = SpinHamiltonian.random(3, 4)
    np.testing.assert_allclose(h.matrix, h.matrix.conj().T)
    np.testing.assert_array_equal(h.matrix, SpinHamiltonian.random(3, 4).matrix)


def test_evolve_matches_expm(random_states):
    for st in random_states:
        h = SpinHamiltonian.random(st.twice_j, 1)
        got = amplitudes_from_state(evolve(st, h, 0.7))
        ref = expm(-0.7j * h.matrix) @ amplitudes_from_state(st)
        np.testing.assert_allclose(got, ref, atol=1e-12)
    with pytest.raises(ValueError):
        evolve(random_states[0], SpinHamiltonian.jz(3), 1.0)


def test_rotation_hamiltonian_moves_coherent_states():
    # gamma = tan(theta/2) exp(-i phi) with conjugated amplitudes puts the
    # spin expectation at azimuth -phi, so exp(-i t Jz) turns gamma by -t
    tj, t = 4, 0.9
    out = evolve(coherent_state(0.5, tj), SpinHamiltonian.jz(tj), t)
    rot = Rotation.from_axis_angle([0, 0, 1], -t)
    assert same_up_to_phase(out.coeffs, rotate_state(rot, coherent_state(0.5, tj)).coeffs)
    assert same_up_to_phase(out.coeffs, coherent_state(0.5 * np.exp(1j * t), tj).coeffs)


def test_spin_matrix_is_unitary_representation():
    m1 = Rotation.from_axis_angle([1, 0.3, 0], 0.8)
    m2 = Rotation.from_axis_angle([0, 1, 1], 2.2)
    for tj in (1, 3):
        d1, d2 = (spin_matrix(r.su2(), tj) for r in (m1, m2))
        np.testing.assert_allclose(d1.conj().T @ d1, np.eye(tj + 1), atol=1e-12)
        d12 = spin_matrix(m1.compose(m2).su2(), tj)
        prod = d1 @ d2
        # equal up to one global phase (the sign of the SU(2) lift for odd 2j)
        c = np.vdot(prod.ravel(), d12.ravel()) / (tj + 1)
        assert abs(abs(c) - 1) < 1e-12
        np.testing.assert_allclose(d12, c * prod, atol=1e-12)


# ---------------------------------------------------------------------------
# pointwise derivatives


def test_pointwise_derivatives_vs_finite_differences(random_states, rng):
    dt = 1e-4
    for st in random_states[1:]:
        h = SpinHamiltonian.random(st.twice_j, rng)
        g = complex(*rng.standard_normal(2))
        plus, minus = evolve(st, h, dt), evolve(st, h, -dt)
        fd = (husimi_eval(plus, g) - husimi_eval(minus, g)) / (2 * dt)
        assert husimi_time_derivative(st, h, g) == pytest.approx(fd, abs=1e-7)
        fd2 = (husimi_eval(plus, g) - 2 * husimi_eval(st, g) + husimi_eval(minus, g)) / dt ** 2
        assert husimi_second_time_derivative(st, h, g) == pytest.approx(fd2, abs=1e-5)
        # the evolved state keeps its global phase, so the Bargmann function is smooth in t
        a = amplitudes_from_state(st)
        ap, am = expm(-1j * dt * h.matrix) @ a, expm(1j * dt * h.matrix) @ a
        sp, sm = state_from_amplitudes(ap), state_from_amplitudes(am)
        fdb = (bargmann_eval(sp, g) - bargmann_eval(sm, g)) / (2 * dt)
        assert abs(bargmann_time_derivative(st, h, g) - fdb) < 1e-6 * max(1.0, abs(fdb))


# ---------------------------------------------------------------------------
# rates


@pytest.mark.parametrize("kind,q", [("S", 1.0), ("S", 2.0), ("S", 0.5), ("W", 3.0),
                                    ("W", 1.5), ("Z", 1.0), ("Y", 2.0), ("Z", 2.5)])
def test_rate_vs_finite_difference(kind, q):
    st = haar_random_state(4, 17)
    h = SpinHamiltonian.random(4, 18)
    assert entropy_rate(st, h, q, kind) == pytest.approx(
        finite_difference_rate(st, h, q, kind), abs=1e-6)


def test_jx_rate_example():
    st = haar_random_state(3, 99)
    h = SpinHamiltonian.jx(3)
    assert entropy_rate(st, h, 2.0, "S") == pytest.approx(finite_difference_rate(st, h, 2.0, "S"), abs=1e-7)


def test_rotation_generators_leave_measures_constant(random_states):
    for st in random_states[1:4]:
        h = SpinHamiltonian.rotation(st.twice_j, 0.7, 0.3 - 0.4j)
        for q in (1.0, 2.0):
            assert abs(entropy_rate(st, h, q, "S")) < 1e-10
        s0 = measure_value(st, 1.0, "S")
        assert measure_value(evolve(st, h, 1.3), 1.0, "S") == pytest.approx(s0, abs=1e-10)


def test_rate_validation(random_states):
    st = random_states[2]
    h = SpinHamiltonian.jz(st.twice_j)
    with pytest.raises(ValueError):
        entropy_rate(st, h, 2.0, "R")
    with pytest.raises(ValueError):
        entropy_rate(st, h, 0.0)


# ---------------------------------------------------------------------------
# extremality at coherent states


def test_coherent_states_are_stationary():
    rep = extremality_report(2, [0.5, 1.0, 2.0, 3.0], 5, rng=3)
    assert rep.first_ok and rep.second_ok and rep.passed
    assert np.all(rep.second[:, 2] <= 1e-8)
    assert np.all(rep.second[:, 0] >= -1e-8)


def test_second_derivative_vs_finite_difference():
    st = haar_random_state(3, 5)
    h = SpinHamiltonian.random(3, 6)
    dt = 1e-3
    for q, kind in ((2.0, "W"), (2.5, "W"), (2.0, "Y")):
        vals = [measure_value(evolve(st, h, s * dt), q, kind) for s in (-2, -1, 0, 1, 2)]
        fd = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * dt * dt)
        assert moment_second_derivative(st, h, q, kind) == pytest.approx(fd, abs=1e-5)


def test_second_derivative_diverges_below_threshold():
    # a coherent state has one zero of multiplicity 2j at its antipode where
    # <gamma|H psi> does not vanish for generic H, so H**(q-1) d2H/dt2 is not
    # integrable once 2j (1 - q) >= 1, here q <= 3/4
    st = coherent_state(0, 4)
    h = SpinHamiltonian.random(4, 1)
    assert moment_second_derivative(st, h, 0.2, "W") == math.inf
    assert math.isfinite(moment_second_derivative(st, h, 0.9, "W"))


def test_time_series_rows():
    st = haar_random_state(2, 8)
    ts = time_series(st, SpinHamiltonian.jx(2), 0.4, 2, [1.0, 2.0])
    rows = ts.rows()
    assert len(rows) == 6 and rows[0]["t"] == 0.0
    for r in rows:
        assert r["dS_dt_analytic"] == pytest.approx(r["dS_dt_fd"], abs=1e-6)
    with pytest.raises(ValueError):
        time_series(st, SpinHamiltonian.jx(2), 0.0, 2, [1.0])
