"""Nonlinear maps on pure states that concentrate the Husimi function.

``f1`` turns every Bargmann zero onto the meridian ``phi = 0``, ``f2``
strips the phases of the Bargmann coefficients and ``f3`` pushes the zeros
towards their barycenter.  ``f2`` never decreases the integer moments;
:func:`theorem2_driver` alternates it with rotations to climb to the
coherent-state value of ``W(q)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .entropy import coherent_moment, measure_report, moment_exact, MeasureReport
from .spin import (
    PureState, Rotation, SpherePoint, StellarRoots, apply_su2, log_binom, roots_from_state,
    rotate_state, state_from_roots,
)

ALTERNATING_TOL = 1e-9
BACKOFF = 1.0 - 2.0 ** -10


class DegenerateConfigurationError(ArithmeticError):
    """The requested construction is undefined for this root configuration."""


# ---------------------------------------------------------------------------
# the maps


def f1(state: PureState) -> PureState:
    """Rotate every finite zero about the z-axis onto ``phi = 0``.

    A zero ``gamma`` goes to ``|gamma|``; zeros at the poles stay put.
    """
    roots = roots_from_state(state)
    moved = StellarRoots(state.twice_j, np.abs(roots.finite_roots), roots.roots_at_infinity)
    return state_from_roots(moved)


QUARTER_TURN_X = Rotation.from_axis_angle([1.0, 0.0, 0.0], math.pi / 2.0)


def f1_prime_collapse(state: PureState) -> PureState:
    """``f1`` after a quarter turn about x after ``f1``.

    The first ``f1`` puts all zeros on the great circle ``y = 0``, the
    quarter turn carries that circle onto the equator, and the second
    ``f1`` sends every equatorial point to ``gamma = 1``.  The result is
    always the coherent state centred at ``gamma = -1``.
    """
    return f1(rotate_state(QUARTER_TURN_X, f1(state)))


def f2(state: PureState) -> PureState:
    """Replace every Bargmann coefficient by its modulus."""
    return PureState.from_coeffs(np.abs(state.coeffs), state.twice_j)


def _slerp(a: np.ndarray, b: np.ndarray, t: float) -> np.ndarray:
    """Point at fraction ``t`` along the great circle from ``a`` to ``b``."""
    cos_w = float(np.clip(a @ b, -1.0, 1.0))
    w = math.acos(cos_w)
    if w < 1e-15:
        return b.copy()
    perp = b - cos_w * a
    nrm = np.linalg.norm(perp)
    if nrm < 1e-15:
        # antipodal: any great circle through a and b will do
        perp = np.cross(a, [1.0, 0.0, 0.0] if abs(a[0]) < 0.9 else [0.0, 1.0, 0.0])
        nrm = np.linalg.norm(perp)
    perp /= nrm
    return math.cos(t * w) * a + math.sin(t * w) * perp


def f3(state: PureState, step: float = 1.0, tol: float = 1e-12) -> PureState:
    """Move each zero towards the barycenter direction.

    The barycenter is the plain sum of the unit vectors of the zeros.
    Every zero travels the fraction ``step`` of its geodesic distance to
    the barycenter direction; ``step = 1`` yields a coherent state.
    """
    if not 0.0 < step <= 1.0:
        raise ValueError("step must lie in (0, 1]")
    tj = state.twice_j
    if tj == 0:
        return state
    vecs = roots_from_state(state).unit_vectors()
    bary = vecs.sum(axis=0)
    if np.linalg.norm(bary) < tol * tj:
        raise DegenerateConfigurationError("degenerate barycenter")
    target = bary / np.linalg.norm(bary)
    moved = [SpherePoint.from_vector(_slerp(v, target, step)) for v in vecs]
    return state_from_roots(StellarRoots.from_points(moved, tj))


# ---------------------------------------------------------------------------
# phase-stripping inequality


def phase_pattern(coeffs, tol: float = 1e-9) -> float | None:
    """Angle ``a`` with ``f_k = c |f_k| e^{i a k}`` for all k, or ``None``.

    Coefficients below ``tol`` (relative to the largest) are ignored.
    """
    f = np.asarray(coeffs, dtype=complex)
    idx = np.flatnonzero(np.abs(f) > tol * np.abs(f).max())
    if idx.size <= 2:
        if idx.size < 2:
            return 0.0
        return cmath.phase(f[idx[1]] / f[idx[0]]) / (idx[1] - idx[0])
    u = f[idx] / np.abs(f[idx])
    d = int(idx[1] - idx[0])
    base = cmath.phase(u[1] / u[0])
    for branch in range(d):
        a = (base + 2.0 * math.pi * branch) / d
        resid = u * np.exp(-1j * a * idx)
        if np.max(np.abs(resid - resid[0])) < math.sqrt(tol):
            return a
    return None


@dataclass
class Lemma1Report:
    w_before: float
    w_after: float
    inequality_holds: bool
    equality_case_detected: bool
    equal_within_tol: bool


def lemma1_check(state: PureState, q: int, tol: float = 1e-12) -> Lemma1Report:
    """Compare ``W(q)`` before and after :func:`f2`.

    ``equality_case_detected`` reports whether the coefficient phases are
    linear in ``k``, the condition under which the two moments agree.
    ``equal_within_tol`` is the direct numerical comparison.
    """
    if int(q) != q or q < 2:
        raise ValueError("lemma1_check needs an integer q >= 2")
    before = moment_exact(state, int(q))
    after = moment_exact(f2(state), int(q))
    return Lemma1Report(
        w_before=before,
        w_after=after,
        inequality_holds=after >= before - tol,
        equality_case_detected=phase_pattern(state.coeffs) is not None,
        equal_within_tol=abs(after - before) <= max(tol, 1e-11 * before),
    )


# ---------------------------------------------------------------------------
# rotation scan and the climbing iteration


def _y_turn(beta: float) -> np.ndarray:
    """Moebius matrix of the turn about y carrying polar angle ``beta`` (phi = 0) to the north pole."""
    c, s = math.cos(beta / 2.0), math.sin(beta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _f0(coeffs: np.ndarray, twice_j: int, beta: float) -> float:
    # constant coefficient after the turn: sum f_k cos(b/2)^(2j-k) sin(b/2)^k
    k = np.arange(twice_j + 1)
    c, s = math.cos(beta / 2.0), math.sin(beta / 2.0)
    return float(np.sum(coeffs * c ** (twice_j - k) * s ** k))


@dataclass
class ScanResult:
    x_max: float
    beta_max: float
    f0: float
    rotated_state: PureState
    derivative_residual: float


def rotation_scan_x(state: PureState, n_scan: int | None = None) -> ScanResult:
    """Maximise the constant coefficient over turns about the y-axis.

    For non-negative coefficients the constant coefficient after the turn
    that brings the real point ``x`` to the north pole is
    ``f0[x] = (1 + x**2)**(-j) sum_k f_k x**k``.  It is maximised over
    ``x = tan(beta / 2)``, ``beta`` in ``[0, pi]``, by a dense scan and a
    bounded refinement.  At an interior maximum the linear coefficient of
    the rotated state vanishes together with ``d f0 / dx``
    (``d f0 / dx = f1[x] / (1 + x**2)``); ``derivative_residual`` is
    ``|f1[x_max]|``, zero up to optimiser tolerance.
    """
    f = state.coeffs
    if np.max(np.abs(f.imag)) > 1e-12 or np.min(f.real) < -1e-12:
        raise ValueError("rotation_scan_x needs real non-negative coefficients (apply f2 first)")
    tj = state.twice_j
    fr = f.real.copy()
    n = n_scan or max(64, 16 * tj)
    betas = np.linspace(0.0, math.pi, n + 1)
    k = np.arange(tj + 1)[:, None]
    c, s = np.cos(betas / 2.0), np.sin(betas / 2.0)
    vals = fr @ (c[None, :] ** (tj - k) * s[None, :] ** k)
    i = int(np.argmax(vals))
    lo, hi = betas[max(i - 1, 0)], betas[min(i + 1, n)]
    beta = betas[i]
    if hi > lo:
        res = minimize_scalar(lambda b: -_f0(fr, tj, b), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        if -res.fun >= vals[i]:
            beta = float(res.x)
    rotated = apply_su2(_y_turn(beta), state)
    x = math.tan(beta / 2.0) if beta < math.pi else math.inf
    interior = 0.0 < beta < math.pi
    resid = abs(rotated.coeffs[1]) if (interior and tj > 0) else 0.0
    return ScanResult(x, beta, _f0(fr, tj, beta), rotated, float(resid))


def alternating_pattern(coeffs, tol: float = ALTERNATING_TOL) -> bool:
    """True when ``f_k = |f_k| (-1)**k`` up to ``tol``."""
    f = np.asarray(coeffs, dtype=complex)
    k = np.arange(f.shape[0])
    return bool(np.max(np.abs(f - np.abs(f) * (-1.0) ** k)) < tol)


@dataclass
class MapTrace:
    """Snapshots of an iteration of a map."""

    map_name: str
    q: float
    states: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    converged: bool = False
    monotone: bool = True
    message: str = ""

    def append(self, state: PureState, report: MeasureReport):
        self.states.append(state)
        self.reports.append(report)

    def __len__(self):
        return len(self.states)

    @property
    def final_state(self) -> PureState:
        return self.states[-1]

    def values(self, kind: str = "W") -> list[float]:
        return [getattr(r, kind)[float(self.q)] for r in self.reports]

    def snapshots(self) -> list[dict]:
        return [
            {"step": i, "map": self.map_name, "twice_j": s.twice_j,
             "coeffs": [[float(c.real), float(c.imag)] for c in s.coeffs],
             "report": r.to_dict()}
            for i, (s, r) in enumerate(zip(self.states, self.reports))
        ]


def _turn(beta: float, chi: float) -> np.ndarray:
    """Moebius matrix of a z-rotation by ``chi`` followed by :func:`_y_turn` ``(beta)``."""
    return _y_turn(beta) @ np.diag([cmath.exp(-0.5j * chi), cmath.exp(0.5j * chi)])


class _StripGain:
    """``W(q)`` of ``f2(R psi)`` for batches of turns ``R = _turn(beta, chi)``.

    The turned polynomial is sampled at the roots of unity and its
    coefficients recovered by FFT, which vectorises over the turns.
    """

    def __init__(self, state: PureState, q: int):
        tj = state.twice_j
        self.q, self.tj = q, tj
        self.f = state.coeffs
        self.k = np.arange(tj + 1)
        self.nodes = np.exp(2j * math.pi * self.k / (tj + 1))
        self.isq = np.exp(-0.5 * log_binom(tj, self.k))
        self.scales = [
            np.exp(0.5 * (log_binom((p - 1) * tj, np.arange((p - 1) * tj + 1))[:, None]
                          + log_binom(tj, self.k)[None, :]
                          - log_binom(p * tj, np.arange((p - 1) * tj + 1)[:, None] + self.k[None, :])))
            for p in range(2, q + 1)
        ]

    def __call__(self, beta, chi) -> np.ndarray:
        beta = np.atleast_1d(np.asarray(beta, dtype=float))
        chi = np.atleast_1d(np.asarray(chi, dtype=float))
        u = np.cos(beta / 2.0) * np.exp(-0.5j * chi)
        v = -np.sin(beta / 2.0) * np.exp(0.5j * chi)
        g = self.nodes[None, :]
        a = np.conj(u)[:, None] * g - v[:, None]
        b = np.conj(v)[:, None] * g + u[:, None]
        k = self.k[None, None, :]
        vals = np.sum(self.f * a[:, :, None] ** k * b[:, :, None] ** (self.tj - k), axis=-1)
        coeffs = np.fft.fft(vals, axis=-1) / (self.tj + 1)
        base = np.abs(coeffs) * self.isq
        base /= np.linalg.norm(base, axis=-1, keepdims=True)
        h = base
        for p, sc in zip(range(2, self.q + 1), self.scales):
            m = np.arange(h.shape[-1])[:, None] + self.k[None, :]
            new = np.zeros((h.shape[0], p * self.tj + 1))
            contrib = h[:, :, None] * base[:, None, :] * sc[None]
            for row in range(h.shape[-1]):
                new[:, m[row]] += contrib[:, row, :]
            h = new
        return (self.tj + 1) / (self.q * self.tj + 1) * np.sum(h * h, axis=-1)


def _best_turn(state: PureState, q: int, seeds) -> tuple[float, float]:
    """Turn maximising ``W(q)`` after phase stripping: grid scan plus Nelder-Mead."""
    gain = _StripGain(state, q)
    bs, cs = np.meshgrid(np.linspace(0.0, math.pi, 9), np.linspace(0.0, 2 * math.pi, 8, endpoint=False))
    cand = np.concatenate([np.column_stack([bs.ravel(), cs.ravel()]), np.asarray(seeds, dtype=float)])
    vals = gain(cand[:, 0], cand[:, 1])
    best = cand[int(np.argmax(vals))]
    res = minimize(lambda x: -gain(x[0], x[1])[0], best, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-17, "maxiter": 600})
    if -res.fun > vals.max():
        best = res.x
    return float(best[0]), float(best[1])


def theorem2_driver(state: PureState, q: int = 2, max_iters: int = 200,
                    tol: float = 1e-12) -> MapTrace:
    """Raise ``W(q)`` to its coherent-state value by rotations and :func:`f2`.

    After stripping the phases of the input, each step applies the turn
    ``R`` that maximises ``W(q)`` of ``f2(R psi)`` and strips again.  The
    candidates searched include the identity, the maximiser of ``f0[x]``
    from :func:`rotation_scan_x` and its shortened version (``x`` scaled by
    ``1 - 2**-10``), plus a z-rotation before the turn.  Iteration stops
    once ``W(q)`` is within ``tol`` of the coherent value; ``monotone``
    records whether every step kept ``W(q)`` non-decreasing.
    """
    if int(q) != q or q < 2:
        raise ValueError("theorem2_driver needs an integer q >= 2")
    q = int(q)
    tj = state.twice_j
    target = coherent_moment(tj, q)
    trace = MapTrace("theorem2", float(q))
    trace.append(state, measure_report(state, [q], method="exact"))
    w = moment_exact(state, q)
    if target - w <= tol or tj <= 1:
        trace.converged = True
        trace.message = "input is coherent"
        return trace
    current = f2(state)
    for _ in range(max_iters):
        scan = rotation_scan_x(current)
        short = 2.0 * math.atan(math.tan(scan.beta_max / 2.0) * BACKOFF) if scan.beta_max < math.pi else scan.beta_max * BACKOFF
        beta, chi = _best_turn(current, q, [(0.0, 0.0), (scan.beta_max, 0.0), (short, 0.0)])
        nxt = f2(apply_su2(_turn(beta, chi), current))
        w_next = moment_exact(nxt, q)
        if w_next < w - tol:
            trace.monotone = False
        if w_next <= w:
            trace.append(current, measure_report(current, [q], method="exact"))
            trace.message = f"no further gain at gap {target - w:.3e}"
            return trace
        current, w = nxt, w_next
        trace.append(current, measure_report(current, [q], method="exact"))
        if target - w <= tol:
            trace.converged = True
            trace.message = f"reached coherent value after {len(trace) - 1} steps"
            return trace
    trace.message = f"gap {target - w:.3e} after {max_iters} steps"
    return trace
