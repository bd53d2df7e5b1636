"""Property-based checks of the structural invariants."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from strategies import points, rotations, states
from wehrl.dynamics import SpinHamiltonian, evolve
from wehrl.ensemble import haar_random_state, l2_squared
from wehrl.entropy import (
    coherent_closed_forms, coherent_moment, dual_moment_exact, measure_report, moment_exact,
    renyi_entropy,
)
from wehrl.maps import f2
from wehrl.quadrature import QuadratureGrid
from wehrl.spin import (
    Rotation, amplitudes_from_state, coherent_state, husimi_eval, husimi_polar, norm_squared,
    roots_from_state, rotate_state, state_from_amplitudes, state_from_roots,
)


def same_up_to_phase(a, b, tol=1e-9):
    return abs(abs(np.vdot(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) < tol


@given(states(), points)
def test_husimi_bounded(s, g):
    assert 0.0 <= husimi_eval(s, g) <= 1.0 + 1e-12
    assert norm_squared(s.coeffs, s.twice_j) == pytest.approx(1.0, abs=1e-12)


@given(states())
def test_husimi_normalised(s):
    grid = QuadratureGrid.exact_for(s.twice_j, 1)
    h = husimi_polar(s.coeffs, s.twice_j, grid.theta, grid.phi)
    assert s.dim * grid.integrate(h) == pytest.approx(1.0, abs=1e-12)


@given(states(max_tj=5))
def test_husimi_vanishes_at_roots(s):
    r = roots_from_state(s)
    for g in r.finite_roots:
        if abs(g) < 1e3:
            assert husimi_eval(s, g) < 1e-10


@given(states(max_tj=5))
def test_roots_round_trip(s):
    back = state_from_roots(roots_from_state(s))
    assert same_up_to_phase(back.coeffs, s.coeffs, tol=1e-7)


@given(states())
def test_amplitudes_round_trip(s):
    np.testing.assert_allclose(state_from_amplitudes(amplitudes_from_state(s)).coeffs, s.coeffs,
                               atol=1e-14)


@given(states(), rotations(), rotations())
def test_rotation_composition(s, r1, r2):
    lhs = rotate_state(r2.compose(r1), s)
    rhs = rotate_state(r2, rotate_state(r1, s))
    assert same_up_to_phase(lhs.coeffs, rhs.coeffs, tol=1e-10)


@given(states(max_tj=8), rotations())
def test_integer_moments_rotation_invariant(s, r):
    t = rotate_state(r, s)
    for q in (2, 3, 4):
        assert moment_exact(t, q) == pytest.approx(moment_exact(s, q), rel=1e-10)
        assert dual_moment_exact(t, q) == pytest.approx(dual_moment_exact(s, q), rel=1e-10)


@given(states(max_tj=8))
def test_integer_moments_bounded_by_coherent_value(s):
    for q in (2, 3, 4):
        w = moment_exact(s, q)
        # Jensen: N int H**q >= N (int H)**q = N**(1-q)
        assert w >= s.dim ** (1 - q) * (1 - 1e-12)
        assert w <= coherent_moment(s.twice_j, q) + 1e-12
    # L2 distance to uniform is W(2) - 1/N and R lies in [R_coh, N]
    r = 1.0 / moment_exact(s, 2)
    assert 1.0 / coherent_moment(s.twice_j, 2) - 1e-10 <= r <= s.dim + 1e-10
    assert l2_squared(s) >= 0.0


@given(states(max_tj=8))
def test_phase_stripping_never_lowers_moments(s):
    g = f2(s)
    for q in (2, 3, 4):
        assert moment_exact(g, q) >= moment_exact(s, q) - 1e-12


@settings(max_examples=15)
@given(states(max_tj=4))
def test_renyi_monotone_and_bounded(s):
    qs = [0.5, 1.0, 2.0, 3.0, 4.0]
    rep = measure_report(s, qs)
    vals = [rep.S[q] for q in qs]
    for a, b in zip(vals, vals[1:]):
        assert b <= a + 1e-10
    for q in qs:
        assert coherent_closed_forms(s.twice_j, q).S[q] - 1e-9 <= rep.S[q] <= math.log(s.dim) + 1e-9


@given(states(max_tj=6), states(max_tj=6))
def test_order_duality(a, b):
    if a.twice_j != b.twice_j:
        return
    for q in (2, 3):
        wa, wb = moment_exact(a, q), moment_exact(b, q)
        sa, sb = renyi_entropy(a, q), renyi_entropy(b, q)
        if abs(wa - wb) > 1e-12:
            assert (wa > wb) == (sa < sb)


@given(states(max_tj=5), st.floats(-3, 3))
def test_evolution_is_unitary(s, t):
    h = SpinHamiltonian.random(s.twice_j, 0)
    assert norm_squared(evolve(s, h, t).coeffs, s.twice_j) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=10)
@given(st.integers(1, 4), st.integers(0, 2**31))
def test_coherent_states_are_local_minima(tj, seed):
    # small tangent perturbations raise every entropy
    rng = np.random.default_rng(seed)
    a = amplitudes_from_state(coherent_state(0, tj))
    d = rng.standard_normal(tj + 1) + 1j * rng.standard_normal(tj + 1)
    d -= np.vdot(a, d) * a
    d /= np.linalg.norm(d)
    s = state_from_amplitudes(a + 1e-3 * d, normalize=True)
    qs = [0.5, 1.0, 2.0, 3.0]
    rep = measure_report(s, qs)
    for q in qs:
        assert rep.S[q] >= coherent_closed_forms(tj, q).S[q] - 1e-9


def test_haar_distribution_rotation_invariant():
    # two-sample KS test of S(2) with and without a fixed rotation after sampling
    rot = Rotation.from_axis_angle([0.3, -1.0, 0.5], 1.1)
    rng_a, rng_b = np.random.default_rng(1), np.random.default_rng(2)
    a = [renyi_entropy(haar_random_state(4, rng_a), 2) for _ in range(1000)]
    b = [renyi_entropy(rotate_state(rot, haar_random_state(4, rng_b)), 2) for _ in range(1000)]
    assert stats.ks_2samp(a, b).pvalue > 0.01
