import math

import numpy as np
import pytest
from scipy.linalg import expm
from scipy.special import comb

from wehrl.dynamics import generators
from wehrl.quadrature import QuadratureGrid
from wehrl.spin import (
    PureState, Rotation, SpherePoint, StellarRoots, amplitudes_from_state, apply_su2,
    bargmann_eval, basis_state, coherence_defect, coherent_state, husimi_eval, husimi_maximum,
    is_coherent, kernel, mobius_rotate_point, roots_from_state, rotate_roots, rotate_state,
    state_from_amplitudes, state_from_roots,
)


def rodrigues(axis, angle):
    n = np.asarray(axis, float) / np.linalg.norm(axis)
    k = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return np.eye(3) + math.sin(angle) * k + (1 - math.cos(angle)) * k @ k


def same_up_to_phase(a, b, tol=1e-10):
    a = np.asarray(a)
    b = np.asarray(b)
    return abs(abs(np.vdot(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) < tol


# ---------------------------------------------------------------------------
# points


def test_poles_and_angles():
    assert SpherePoint(0j).theta == 0.0
    s = SpherePoint.south_pole()
    assert s.at_infinity and s.theta == math.pi
    np.testing.assert_allclose(s.unit_vector(), [0, 0, -1])
    p = SpherePoint.from_angles(1.1, 0.4)
    assert p.theta == pytest.approx(1.1)
    assert p.phi == pytest.approx(0.4)
    np.testing.assert_allclose(p.unit_vector(), [math.sin(1.1) * math.cos(0.4),
                                                 math.sin(1.1) * math.sin(0.4), math.cos(1.1)])


def test_from_vector_round_trip(rng):
    for v in rng.standard_normal((20, 3)):
        v /= np.linalg.norm(v)
        np.testing.assert_allclose(SpherePoint.from_vector(v).unit_vector(), v, atol=1e-13)


def test_antipode_and_chordal_distance():
    p = SpherePoint(0.3 - 0.7j)
    assert p.chordal_distance(p.antipode()) == pytest.approx(2.0)
    assert SpherePoint(0j).antipode().at_infinity


def test_infinite_gamma_rejected():
    with pytest.raises(ValueError):
        SpherePoint(complex("inf"))


# ---------------------------------------------------------------------------
# states


def test_basis_state_amplitudes():
    for tj in range(0, 6):
        for i in range(tj + 1):
            a = amplitudes_from_state(basis_state(tj / 2 - i, tj))
            np.testing.assert_allclose(np.abs(a), np.eye(tj + 1)[i], atol=1e-15)


def test_basis_state_rejects_bad_m():
    with pytest.raises(ValueError):
        basis_state(0.5, 2)
    with pytest.raises(ValueError):
        basis_state(2, 2)


def test_from_coeffs_normalises_and_fixes_phase():
    s = PureState.from_coeffs([1j, 2j, 0.5j])
    a = amplitudes_from_state(s)
    assert np.linalg.norm(a) == pytest.approx(1.0)
    assert s.coeffs[np.argmax(np.abs(s.coeffs))].imag == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        PureState.from_coeffs([0, 0, 0])


def test_amplitude_round_trip(rng):
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    a /= np.linalg.norm(a)
    np.testing.assert_allclose(amplitudes_from_state(state_from_amplitudes(a)), a, atol=1e-14)


def test_coherent_overlap_formula(rng):
    # |<n1|n2>|^2 = ((1 + n1.n2) / 2)**(2j)
    for tj in (1, 3, 6):
        for _ in range(5):
            g1, g2 = (complex(*rng.standard_normal(2)) for _ in range(2))
            c1, c2 = coherent_state(g1, tj), coherent_state(g2, tj)
            n1, n2 = SpherePoint(g1).unit_vector(), SpherePoint(g2).unit_vector()
            assert abs(c1.overlap(c2)) ** 2 == pytest.approx(((1 + n1 @ n2) / 2) ** tj, abs=1e-13)


def test_coherent_poles_are_extreme_basis_states():
    for tj in range(1, 6):
        assert same_up_to_phase(coherent_state(0, tj).coeffs, basis_state(tj / 2, tj).coeffs)
        assert same_up_to_phase(coherent_state(math.inf, tj).coeffs, basis_state(-tj / 2, tj).coeffs)


def test_husimi_is_bargmann_over_kernel(random_states, rng):
    for s in random_states:
        g = complex(*rng.standard_normal(2))
        assert husimi_eval(s, g) == pytest.approx(abs(bargmann_eval(s, g)) ** 2 / kernel(g, s.twice_j), rel=1e-12)
        assert husimi_eval(s, g) == pytest.approx(abs(coherent_state(g, s.twice_j).overlap(s)) ** 2, rel=1e-12)


def test_coherent_husimi_peak():
    c = coherent_state(0.4 + 0.2j, 5)
    assert husimi_eval(c, 0.4 + 0.2j) == pytest.approx(1.0)
    p, val = husimi_maximum(c)
    assert val == pytest.approx(1.0, abs=1e-12)
    assert p.chordal_distance(SpherePoint(0.4 + 0.2j)) < 1e-5


def test_resolution_of_identity(random_states):
    # N int <psi|gamma><gamma|phi> dmu = <psi|phi>, exact on a degree-1 grid
    for psi, phi in zip(random_states[:-1], random_states[1:]):
        if psi.twice_j != phi.twice_j:
            phi = state_from_amplitudes(np.roll(amplitudes_from_state(psi), 1))
        grid = QuadratureGrid.exact_for(psi.twice_j, 1)
        acc = 0j
        for t, p, w in zip(grid.theta, grid.phi, grid.weights):
            c = coherent_state(SpherePoint.from_angles(t, p), psi.twice_j)
            acc += w * psi.overlap(c) * c.overlap(phi)
        assert acc * psi.dim == pytest.approx(psi.overlap(phi), abs=1e-13)


def test_coherence_detection(random_states):
    assert is_coherent(coherent_state(1.3 - 0.2j, 4))
    for s in random_states[1:]:
        assert coherence_defect(s) > 1e-3
        assert not is_coherent(s)


# ---------------------------------------------------------------------------
# stellar representation


def test_roots_are_zeros_and_round_trip(random_states):
    for s in random_states:
        r = roots_from_state(s)
        for g in r.finite_roots:
            assert abs(bargmann_eval(s, g)) < 1e-9 * max(1.0, abs(g)) ** s.twice_j
        back = state_from_roots(r)
        assert same_up_to_phase(back.coeffs, s.coeffs)


def test_roots_at_infinity():
    # |m = j - 1> has psi ~ gamma, one zero at 0 and 2j - 1 at infinity
    r = roots_from_state(basis_state(1, 4))
    assert r.roots_at_infinity == 3
    np.testing.assert_allclose(r.finite_roots, [0.0], atol=1e-14)


def test_coherent_roots_at_antipode():
    g = 0.5 - 1.5j
    r = roots_from_state(coherent_state(g, 4))
    anti = SpherePoint(g).antipode()
    # a fourfold zero is only resolved to about eps**(1/4)
    for p in r.points():
        assert p.chordal_distance(anti) < 1e-3


def test_stellar_roots_validation():
    with pytest.raises(ValueError):
        StellarRoots(3, [0.1, 0.2])
    with pytest.raises(ValueError):
        StellarRoots(2, [0.1, complex("inf")])


# ---------------------------------------------------------------------------
# rotations


def test_rotation_matches_operator_form(random_states):
    # D = exp(alpha J-) exp((i phi - log(1 + |alpha|^2)) Jz) exp(-conj(alpha) e^{-i phi} J+)
    for s in random_states:
        g = generators(s.twice_j)
        for alpha, phi in ((0.3 - 0.8j, 0.7), (1.7 + 0.1j, 4.0), (0j, 2.0)):
            d = (expm(alpha * g["Jminus"])
                 @ expm((1j * phi - math.log(1 + abs(alpha) ** 2)) * g["Jz"])
                 @ expm(-np.conj(alpha) * np.exp(-1j * phi) * g["Jplus"]))
            np.testing.assert_allclose(d.conj().T @ d, np.eye(s.dim), atol=1e-10)
            got = amplitudes_from_state(rotate_state(Rotation(alpha, phi), s))
            assert same_up_to_phase(got, d @ amplitudes_from_state(s))


def test_axis_angle_matches_rodrigues(rng):
    for _ in range(10):
        axis, angle = rng.standard_normal(3), rng.uniform(0, 2 * math.pi)
        rot = Rotation.from_axis_angle(axis, angle)
        m = rodrigues(axis, angle)
        for v in rng.standard_normal((4, 3)):
            v /= np.linalg.norm(v)
            got = mobius_rotate_point(rot, SpherePoint.from_vector(v)).unit_vector()
            np.testing.assert_allclose(got, m @ v, atol=1e-12)


def test_rotation_carries_coherent_states(rng):
    rot = Rotation.from_axis_angle([1, 2, -0.5], 2.1)
    for tj in (1, 4):
        g = complex(*rng.standard_normal(2))
        moved = rotate_state(rot, coherent_state(g, tj))
        target = coherent_state(mobius_rotate_point(rot, g), tj)
        assert same_up_to_phase(moved.coeffs, target.coeffs)


def test_rotation_moves_roots(random_states):
    rot = Rotation(0.6 + 0.3j, 1.0)
    for s in random_states[1:]:
        a = rotate_roots(rot, roots_from_state(s))
        b = roots_from_state(rotate_state(rot, s))
        for p in a.points():
            assert min(p.chordal_distance(q) for q in b.points()) < 1e-6


def test_composition_and_inverse(random_states):
    r1, r2 = Rotation(0.2 - 0.5j, 0.3), Rotation(-1.1 + 0.4j, 5.0)
    for s in random_states:
        lhs = rotate_state(r1.compose(r2), s)
        rhs = rotate_state(r1, rotate_state(r2, s))
        assert same_up_to_phase(lhs.coeffs, rhs.coeffs)
        back = rotate_state(r1.inverse(), rotate_state(r1, s))
        assert same_up_to_phase(back.coeffs, s.coeffs)


def test_apply_su2_half_turn():
    # u = 0: the half turn about x swaps the poles
    half = np.array([[0, 1j], [1j, 0]])
    out = apply_su2(half, basis_state(1.5, 3))
    assert same_up_to_phase(out.coeffs, basis_state(-1.5, 3).coeffs)


def test_from_su2_rejects_u_zero():
    with pytest.raises(ValueError):
        Rotation.from_su2(0j, 1.0)


def test_binomial_helpers():
    from wehrl.spin import binom, log_binom
    k = np.arange(11)
    np.testing.assert_allclose(binom(10, k), comb(10, k))
    np.testing.assert_allclose(np.exp(log_binom(10, k)), comb(10, k))
