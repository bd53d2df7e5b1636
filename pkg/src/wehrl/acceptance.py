"""Numerical acceptance checks for the whole library.

Each ``criterion_*`` function runs one battery and returns a
:class:`CriterionResult`.  :func:`run_all` runs them in order; the
``verify`` subcommand of the command line tool prints one line per check.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    SpinHamiltonian, entropy_rate, evolve, extremality_report, finite_difference_rate,
)
from .ensemble import (
    expected_l2_squared, expected_wehrl, haar_random_state, l2_squared, mc_mean_measure,
)
from .entropy import (
    coherent_closed_forms, coherent_moment, jz_closed_forms, measure_report, moment_exact,
    moment_quadrature, renyi_entropy, s_from_y_series, z_from_w_series,
)
from .maps import lemma1_check, theorem2_driver
from .spin import PureState, Rotation, basis_state, coherent_state, mobius_rotate_point, rotate_state

DEFAULT_SEED = 20240611


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f} s)"


def _timed(number: int, name: str):
    def wrap(func):
        def run(*args, **kwargs) -> CriterionResult:
            t0 = time.perf_counter()
            passed, detail = func(*args, **kwargs)
            return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)
        run.__name__ = func.__name__
        run.__doc__ = func.__doc__
        run.number = number
        return run
    return wrap


def _rng(seed):
    return np.random.default_rng(seed)


def _random_point(rng) -> complex:
    return complex(rng.standard_normal(), rng.standard_normal())


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(b))


def _report_deviation(rep, ref, q) -> float:
    dev = max(_rel(getattr(rep, k)[q], getattr(ref, k)[q]) for k in "WSYZ")
    return max(dev, _rel(rep.R, ref.R), _rel(rep.T, ref.T))


# ---------------------------------------------------------------------------


@_timed(1, "coherent closed forms")
def criterion_closed_forms(seed=DEFAULT_SEED, time_limit: float = 10.0):
    """Coherent-state measures for ``2j <= 20`` and ``q`` in {0.5, 1, 2, 3, 4}."""
    t0 = time.perf_counter()
    rng = _rng(seed)
    qs = [0.5, 1.0, 2.0, 3.0, 4.0]
    quad_dev = exact_dev = 0.0
    for tj in range(1, 21):
        st = coherent_state(_random_point(rng), tj)
        refs = {q: coherent_closed_forms(tj, q) for q in qs}
        quad = measure_report(st, qs, method="quadrature")
        exact = measure_report(st, [2, 3, 4], method="exact")
        for q in qs:
            quad_dev = max(quad_dev, _report_deviation(quad, refs[q], q))
        for q in (2.0, 3.0, 4.0):
            exact_dev = max(exact_dev, _report_deviation(exact, refs[q], q))
    elapsed = time.perf_counter() - t0
    ok = quad_dev < 1e-10 and exact_dev < 1e-12 and elapsed < time_limit
    return ok, f"quadrature dev {quad_dev:.1e} (<1e-10), exact dev {exact_dev:.1e} (<1e-12), {elapsed:.1f} s (<{time_limit:g} s)"


@_timed(2, "Jz eigenstate closed forms")
def criterion_jz(seed=DEFAULT_SEED):
    """``W(q)`` and ``S(q)`` of every ``|m>``; extreme ``m`` rows equal the coherent rows."""
    dev = 0.0
    identical = True
    for tj in range(1, 21):
        north = measure_report(coherent_state(0, tj), [1, 2, 3])
        south = measure_report(coherent_state(math.inf, tj), [1, 2, 3])
        for twice_m in range(-tj, tj + 1, 2):
            st = basis_state(twice_m / 2, tj)
            rep = measure_report(st, [1, 2, 3])
            for q in (1, 2, 3):
                ref = jz_closed_forms(tj, twice_m / 2, q)
                dev = max(dev, _rel(rep.W[q], ref.W[q]), _rel(rep.S[q], ref.S[q]))
            if abs(twice_m) == tj:
                pole = north if twice_m > 0 else south
                identical &= rep.rows() == pole.rows()
                for q in (1, 2, 3):
                    ref = jz_closed_forms(tj, twice_m / 2, q)
                    coh = coherent_closed_forms(tj, q)
                    identical &= ref.W[q] == coh.W[q] or _rel(ref.W[q], coh.W[q]) < 1e-15
    return dev < 1e-9 and identical, f"max dev {dev:.1e} (<1e-9), extreme-m rows identical: {identical}"


def random_state(tj: int, rng) -> PureState:
    return haar_random_state(tj, rng)


@_timed(3, "exact vs quadrature moments")
def criterion_moment_oracle(seed=DEFAULT_SEED, n_states: int = 200):
    rng = _rng(seed)
    dev = 0.0
    for _ in range(n_states):
        st = random_state(int(rng.integers(1, 17)), rng)
        for q in (2, 3, 4):
            dev = max(dev, abs(moment_exact(st, q) - moment_quadrature(st, q)))
    return dev < 1e-10, f"max |exact - quadrature| {dev:.1e} over {n_states} states (<1e-10)"


@_timed(4, "monotonicity in q")
def criterion_monotone(seed=DEFAULT_SEED, n_states: int = 100):
    rng = _rng(seed)
    qs = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0]
    worst = -math.inf
    for _ in range(n_states):
        st = random_state(int(rng.integers(1, 9)), rng)
        rep = measure_report(st, qs)
        s = np.array([rep.S[q] for q in qs])
        worst = max(worst, float(np.max(np.diff(s))))
    return worst <= 1e-10, f"largest increase of S(q) {worst:.1e} (<=1e-10)"


def phase_pattern_state(tj: int, rng) -> PureState:
    """Random moduli with coefficient phases linear in ``k``."""
    mod = rng.random(tj + 1) + 0.1
    a, c = rng.uniform(-math.pi, math.pi, 2)
    return PureState.from_coeffs(mod * np.exp(1j * (c + a * np.arange(tj + 1))), tj, canonical=False)


@_timed(5, "phase stripping raises moments")
def criterion_lemma1(seed=DEFAULT_SEED, n_states: int = 1000, n_pattern: int = 50):
    rng = _rng(seed)
    worst = math.inf
    missed = wrong = 0
    for _ in range(n_states):
        st = random_state(int(rng.integers(1, 11)), rng)
        for q in (2, 3):
            r = lemma1_check(st, q)
            worst = min(worst, r.w_after - r.w_before)
            # 2j = 1 states always have linear phases, and then equality does hold
            wrong += r.equality_case_detected != r.equal_within_tol
    for _ in range(n_pattern):
        st = phase_pattern_state(int(rng.integers(1, 11)), rng)
        for q in (2, 3):
            r = lemma1_check(st, q)
            missed += not (r.equality_case_detected and r.equal_within_tol)
            worst = min(worst, r.w_after - r.w_before)
    ok = worst >= -1e-12 and missed == 0 and wrong == 0
    return ok, (f"min W(F2 psi) - W(psi) {worst:.1e} (>=-1e-12), pattern states missed {missed}, "
                f"detection/equality mismatches {wrong}")


@_timed(6, "climbing iteration reaches coherent value")
def criterion_driver(seed=DEFAULT_SEED, n_states: int = 50):
    rng = _rng(seed)
    gap = 0.0
    bad = 0
    for _ in range(n_states):
        tj = int(rng.integers(2, 9))
        tr = theorem2_driver(random_state(tj, rng), 2)
        g = coherent_moment(tj, 2) - tr.values("W")[-1]
        gap = max(gap, g)
        bad += not (tr.monotone and g <= 1e-6)
    return bad == 0, f"largest final gap {gap:.1e} (<=1e-6), failures {bad}/{n_states}"


@_timed(7, "coherent states are extremal")
def criterion_extremal(seed=DEFAULT_SEED, n_hamiltonians: int = 100):
    rng = _rng(seed)
    qs = [0.5, 1.0, 2.0, 3.0]
    parts, ok = [], True
    for tj in (2, 4):
        rep = extremality_report(tj, qs, n_hamiltonians, rng)
        d1 = float(np.max(np.abs(rep.first)))
        d2_2 = float(np.max(rep.second[:, qs.index(2.0)]))
        d2_h = float(np.min(rep.second[:, qs.index(0.5)]))
        ok &= d1 < 1e-8 and d2_2 <= 1e-8 and d2_h >= -1e-8
        parts.append(f"2j={tj}: max|dW/dt| {d1:.1e}, max d2W(2) {d2_2:.2g}, min d2W(1/2) {d2_h:.2g}")
    return ok, "; ".join(parts)


@_timed(8, "Haar-random averages")
def criterion_random(seed=DEFAULT_SEED, n_samples: int = 10_000, time_limit: float = 60.0):
    t0 = time.perf_counter()
    parts, ok = [], True
    for n in (3, 5, 9):
        s = mc_mean_measure(n - 1, 1.0, n_samples, seed + n, measure="S")
        w = mc_mean_measure(n - 1, 2.0, n_samples, seed + 1000 + n, measure="W")
        ok &= s.agrees(3.0) and w.agrees(3.0)
        parts.append(f"N={n}: z(S)={s.z_score:+.2f}, z(W2)={w.z_score:+.2f}")
    asym = abs(expected_wehrl(1000) - (math.log(1000) + np.euler_gamma - 1.0))
    elapsed = time.perf_counter() - t0
    ok &= asym < 0.01 and elapsed < time_limit
    parts.append(f"N=1000 asymptotic gap {asym:.1e} (<0.01), {elapsed:.1f} s (<{time_limit:g} s)")
    return ok, "; ".join(parts)


def coherent_l2_literal_value(tj: int) -> float:
    """Value ``2j / (4j + 2)`` asserted for the coherent-state squared L2 distance."""
    return tj / (2 * tj + 2)


@_timed(9, "L2 distance to uniform")
def criterion_l2(seed=DEFAULT_SEED, n_samples: int = 10_000):
    """Coherent squared distance against ``2j/(4j+2)``, and the Haar mean.

    The coherent value computed here is ``(2j)**2 / ((2j+1)(4j+1))``,
    which differs from ``2j/(4j+2)`` for every finite ``j``, so the first
    half of this check fails.
    """
    dev = 0.0
    for tj in range(1, 21):
        dev = max(dev, abs(l2_squared(coherent_state(0, tj)) - coherent_l2_literal_value(tj)))
    coh_ok = dev < 1e-12
    parts = [f"coherent |L2sq - 2j/(4j+2)| max {dev:.3g} ({'ok' if coh_ok else 'mismatch'})"]
    mc_ok, mc_detail = mc_l2_only(seed, n_samples)
    parts.append(mc_detail)
    return coh_ok and mc_ok, "; ".join(parts)


def mc_l2_only(seed=DEFAULT_SEED, n_samples: int = 10_000) -> tuple[bool, str]:
    parts, ok = [], True
    for tj in (2, 8, 32):
        est = mc_mean_measure(tj, 2.0, n_samples, seed + tj, measure="L2sq")
        ok &= est.agrees(3.0) and math.isclose(est.exact, expected_l2_squared(tj + 1), rel_tol=1e-14)
        parts.append(f"2j={tj}: z={est.z_score:+.2f}")
    return ok, "; ".join(parts)


def random_rotation(rng) -> Rotation:
    axis = rng.standard_normal(3)
    return Rotation.from_axis_angle(axis, float(rng.uniform(0.0, 2.0 * math.pi)))


@_timed(10, "rotation invariance")
def criterion_rotation(seed=DEFAULT_SEED, n_pairs: int = 100):
    rng = _rng(seed)
    qs = [0.5, 1.0, 2.0, 3.0]
    inv = comp = 0.0
    for _ in range(n_pairs):
        tj = int(rng.integers(1, 9))
        st = random_state(tj, rng)
        r1, r2 = random_rotation(rng), random_rotation(rng)
        a = measure_report(st, qs)
        b = measure_report(rotate_state(r1, st), qs)
        for q in qs:
            inv = max(inv, _report_deviation(b, a, q))
        lhs = rotate_state(r1.compose(r2), st)
        rhs = rotate_state(r1, rotate_state(r2, st))
        comp = max(comp, 1.0 - abs(lhs.overlap(rhs)))
        g = _random_point(rng)
        p1 = mobius_rotate_point(r1.compose(r2), g)
        p2 = mobius_rotate_point(r1, mobius_rotate_point(r2, g))
        comp = max(comp, p1.chordal_distance(p2))
    return inv < 1e-9 and comp < 1e-10, f"measure change {inv:.1e} (<1e-9), composition defect {comp:.1e} (<1e-10)"


@_timed(11, "series identities")
def criterion_series(seed=DEFAULT_SEED, n_states: int = 20):
    rng = _rng(seed)
    slack = 1e-10  # accuracy of the direct values
    worst = 0.0
    for _ in range(n_states):
        st = random_state(int(rng.integers(1, 7)), rng)
        rep = measure_report(st, [1.0])
        # the partial sums overshoot, by at most the returned bound
        for (partial, bound), direct in ((z_from_w_series(st), rep.Z[1.0]),
                                         (s_from_y_series(st), rep.S[1.0])):
            worst = max(worst, direct - partial, partial - bound - direct)
    return worst <= slack, f"largest excursion outside [partial - bound, partial] {worst:.1e} (<=1e-10)"


@_timed(12, "entropy rates")
def criterion_dynamics(seed=DEFAULT_SEED, n_pairs: int = 20):
    rng = _rng(seed)
    qs = [0.5, 1.0, 2.0, 3.0]
    dev = 0.0
    for _ in range(n_pairs):
        tj = int(rng.integers(1, 7))
        st = random_state(tj, rng)
        h = SpinHamiltonian.random(tj, rng)
        st = evolve(st, h, float(rng.uniform(0.0, 1.0)))
        for q in qs:
            dev = max(dev, abs(entropy_rate(st, h, q, "S") - finite_difference_rate(st, h, q, "S")))
    const = 0.0
    for tj in (2, 5):
        h = SpinHamiltonian.rotation(tj, float(rng.standard_normal()), complex(*rng.standard_normal(2)))
        st = random_state(tj, rng)
        for q in (0.5, 1.0, 2.0):
            s0 = renyi_entropy(st, q)
            for t in np.linspace(0.25, 2.0, 8):
                const = max(const, abs(renyi_entropy(evolve(st, h, float(t)), q) - s0))
    return dev < 1e-6 and const < 1e-9, f"analytic vs finite difference {dev:.1e} (<1e-6), rotation drift {const:.1e} (<1e-9)"


CRITERIA = [
    criterion_closed_forms, criterion_jz, criterion_moment_oracle, criterion_monotone,
    criterion_lemma1, criterion_driver, criterion_extremal, criterion_random, criterion_l2,
    criterion_rotation, criterion_series, criterion_dynamics,
]


def run_all(seed=DEFAULT_SEED, only=None, echo=None) -> list[CriterionResult]:
    """Run the selected criteria (all by default), optionally echoing each line."""
    out = []
    for crit in CRITERIA:
        if only and crit.number not in only:
            continue
        res = crit(seed=seed)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
