"""Moments, Renyi-Wehrl entropies and their duals.

For a state with Husimi function ``H`` on the sphere (``N = 2j + 1``):

* moments      ``W(q) = N int H**q dmu``,        entropies ``S(q) = log W(q) / (1 - q)``
* dual moments ``Y(q) = N/(N-1) int (1-H)**q dmu``, dual entropies ``Z(q) = log Y(q) / (1 - q)``
* ``q = 1`` gives the Boltzmann forms ``-N int H log H`` and ``-N/(N-1) int (1-H) log(1-H)``
* participation ratios ``R = 1/W(2)`` and ``T = 1/Y(2)``

Integer moments are computed exactly from the Bargmann coefficients; the
rest by quadrature.  Logarithms are natural throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import digamma, gammaln, xlogy

from .quadrature import QuadratureGrid, integrate_adaptive
from .spin import PureState, husimi_maximum, husimi_polar, log_binom, singular_nodes

EXACT = "exact"
QUADRATURE = "quadrature"
CLOSED_FORM = "closed-form"

DEFAULT_RTOL = 1e-10


def _is_int(q) -> bool:
    return float(q).is_integer()


def _check_q(q):
    if not q > 0:
        raise ValueError(f"Renyi index must be positive, got {q}")


def _check_dual(twice_j: int):
    if twice_j == 0:
        raise ValueError("dual measures are undefined for j = 0 (N/(N-1) is singular)")


# ---------------------------------------------------------------------------
# exact integer moments


def _moment_sequence(state: PureState, q_max: int):
    """Yield ``W(1), W(2), ..., W(q_max)`` exactly.

    Works with ``h_p[m] = g_p[m] / sqrt(C(2pj, m))`` where ``g_p`` is the
    ``p``-fold self-convolution of the coefficients; the rescaled values
    stay bounded, so large ``p`` does not overflow.
    """
    tj = state.twice_j
    n = tj + 1
    k = np.arange(n)
    b = state.coeffs * np.exp(-0.5 * log_binom(tj, k))
    h = b.copy()
    for p in range(1, q_max + 1):
        if p > 1:
            size = (p - 1) * tj + 1
            m = np.arange(size)[:, None] + k[None, :]
            scale = 0.5 * (log_binom((p - 1) * tj, np.arange(size))[:, None]
                           + log_binom(tj, k)[None, :] - log_binom(p * tj, m))
            contrib = (h[:, None] * b[None, :]) * np.exp(scale)
            new = np.zeros(p * tj + 1, dtype=complex)
            np.add.at(new, m.ravel(), contrib.ravel())
            h = new
        yield n / (p * tj + 1) * math.fsum(h.real ** 2 + h.imag ** 2)


def moment_exact(state: PureState, q: int) -> float:
    """Integer moment ``W(q)`` from the q-fold coefficient convolution."""
    if not _is_int(q) or q < 1:
        raise ValueError(f"moment_exact needs an integer q >= 1, got {q}")
    for w in _moment_sequence(state, int(q)):
        pass
    return w


def dual_moment_exact(state: PureState, q: int) -> float:
    """Integer dual moment by binomial expansion of ``(1 - H)**q``."""
    _check_dual(state.twice_j)
    if not _is_int(q) or q < 1:
        raise ValueError(f"dual_moment_exact needs an integer q >= 1, got {q}")
    q = int(q)
    n = state.dim
    integrals = [1.0] + [w / n for w in _moment_sequence(state, q)]
    total = math.fsum((-1) ** k * math.comb(q, k) * integrals[k] for k in range(q + 1))
    return n / (n - 1) * total


# ---------------------------------------------------------------------------
# quadrature


def _integrals(state: PureState, integrands, grid: QuadratureGrid | None = None,
               degree=None, rtol: float = DEFAULT_RTOL) -> np.ndarray:
    """``int f(H) dmu`` for each ``f`` in ``integrands`` (functions of H).

    Uses ``grid`` if given, the exact grid for ``degree`` if that is an
    integer, and adaptive cubature otherwise, with the initial region cut
    at the zeros of ``H`` where fractional powers and logarithms kink.
    """
    tj = state.twice_j

    def values(theta, phi):
        h = np.clip(husimi_polar(state.coeffs, tj, theta, phi), 0.0, 1.0)
        return np.stack([f(h) for f in integrands], axis=-1)

    if grid is None and degree is not None and _is_int(degree):
        grid = QuadratureGrid.exact_for(tj, degree)
    if grid is not None:
        return grid.integrate(values(grid.theta, grid.phi).T)
    return np.atleast_1d(integrate_adaptive(values, rtol=rtol,
                                            points=singular_nodes(state)))


def moment_quadrature(state: PureState, q: float, grid: QuadratureGrid | None = None,
                      rtol: float = DEFAULT_RTOL) -> float:
    """``W(q) = N int H**q dmu`` by quadrature.

    Integer ``q`` uses the exact product grid unless ``grid`` is given;
    other ``q`` use adaptive cubature to relative tolerance ``rtol``.
    """
    _check_q(q)
    val = _integrals(state, [lambda h: h ** q], grid, degree=q, rtol=rtol)[0]
    return state.dim * float(val)


def wehrl_entropy(state: PureState, grid: QuadratureGrid | None = None,
                  rtol: float = DEFAULT_RTOL) -> float:
    """Wehrl entropy ``-N int H log H dmu`` (with ``0 log 0 = 0``)."""
    val = _integrals(state, [lambda h: xlogy(h, h)], grid, rtol=rtol)[0]
    return -state.dim * float(val)


def moment(state: PureState, q: float, grid: QuadratureGrid | None = None,
           rtol: float = DEFAULT_RTOL) -> float:
    _check_q(q)
    if _is_int(q) and grid is None:
        return moment_exact(state, int(q))
    return moment_quadrature(state, q, grid, rtol)


def renyi_entropy(state: PureState, q: float, grid: QuadratureGrid | None = None,
                  rtol: float = DEFAULT_RTOL) -> float:
    """Renyi-Wehrl entropy ``S(q)``; ``q = 1`` is the Wehrl entropy."""
    _check_q(q)
    if q == 1:
        return wehrl_entropy(state, grid, rtol)
    return math.log(moment(state, q, grid, rtol)) / (1.0 - q)


def dual_moment(state: PureState, q: float, grid: QuadratureGrid | None = None,
                rtol: float = DEFAULT_RTOL) -> float:
    """``Y(q) = N/(N-1) int (1 - H)**q dmu``."""
    _check_q(q)
    _check_dual(state.twice_j)
    if _is_int(q) and grid is None:
        return dual_moment_exact(state, int(q))
    n = state.dim
    val = _integrals(state, [lambda h: (1.0 - h) ** q], grid, degree=q, rtol=rtol)[0]
    return n / (n - 1) * float(val)


def dual_entropy(state: PureState, q: float, grid: QuadratureGrid | None = None,
                 rtol: float = DEFAULT_RTOL) -> float:
    """Dual entropy ``Z(q)``; ``q = 1`` is ``-N/(N-1) int (1-H) log(1-H)``."""
    _check_q(q)
    _check_dual(state.twice_j)
    if q == 1:
        n = state.dim
        val = _integrals(state, [lambda h: xlogy(1.0 - h, 1.0 - h)], grid, rtol=rtol)[0]
        return -n / (n - 1) * float(val)
    return math.log(dual_moment(state, q, grid, rtol)) / (1.0 - q)


def participation(state: PureState) -> float:
    """Wehrl participation ratio ``R = 1 / W(2)``."""
    return 1.0 / moment_exact(state, 2)


def dual_participation(state: PureState) -> float:
    """Dual participation ratio ``T = 1 / Y(2)``."""
    return 1.0 / dual_moment_exact(state, 2)


# ---------------------------------------------------------------------------
# reports


@dataclass
class MeasureReport:
    """Localisation measures of one state for a list of Renyi indices."""

    W: dict = field(default_factory=dict)
    S: dict = field(default_factory=dict)
    Y: dict = field(default_factory=dict)
    Z: dict = field(default_factory=dict)
    R: float = math.nan
    T: float = math.nan
    method: str = EXACT

    @property
    def qs(self) -> list:
        return sorted(set(self.W) | set(self.S) | set(self.Y) | set(self.Z))

    def check_invariants(self, tol: float = 1e-9) -> bool:
        ok = True
        if 2 in self.W and not math.isnan(self.R):
            ok &= math.isclose(self.R, 1.0 / self.W[2], rel_tol=tol)
        if 2 in self.S and not math.isnan(self.R):
            ok &= math.isclose(self.R, math.exp(self.S[2]), rel_tol=tol)
        if 2 in self.Y and not math.isnan(self.T):
            ok &= math.isclose(self.T, 1.0 / self.Y[2], rel_tol=tol)
        if 2 in self.Z and not math.isnan(self.T):
            ok &= math.isclose(self.T, math.exp(self.Z[2]), rel_tol=tol)
        return bool(ok)

    def rows(self) -> list[dict]:
        return [
            {"q": q, "W": self.W.get(q, math.nan), "S": self.S.get(q, math.nan),
             "Y": self.Y.get(q, math.nan), "Z": self.Z.get(q, math.nan),
             "R": self.R, "T": self.T, "method": self.method}
            for q in self.qs
        ]

    def to_dict(self) -> dict:
        key = lambda d: {repr(float(q)): v for q, v in sorted(d.items())}  # noqa: E731
        return {"W": key(self.W), "S": key(self.S), "Y": key(self.Y), "Z": key(self.Z),
                "R": self.R, "T": self.T, "method": self.method}

    @classmethod
    def from_dict(cls, d: dict) -> MeasureReport:
        unkey = lambda m: {float(q): float(v) for q, v in m.items()}  # noqa: E731
        return cls(unkey(d.get("W", {})), unkey(d.get("S", {})), unkey(d.get("Y", {})),
                   unkey(d.get("Z", {})), float(d.get("R", math.nan)),
                   float(d.get("T", math.nan)), d.get("method", EXACT))


def measure_report(state: PureState, qs, method: str = "auto",
                   rtol: float = DEFAULT_RTOL) -> MeasureReport:
    """All measures of ``state`` for each ``q`` in ``qs``.

    ``method="exact"`` uses coefficient formulas for integer ``q >= 2``,
    ``method="quadrature"`` forces quadrature for every entry, and
    ``"auto"`` takes the exact path where it exists.  Non-integer indices
    and the ``q = 1`` entropies share one adaptive cubature call.
    """
    qs = [float(q) for q in qs]
    for q in qs:
        _check_q(q)
    tj = state.twice_j
    n = state.dim
    dual = tj > 0
    force_quad = method == QUADRATURE
    rep = MeasureReport(method=QUADRATURE if force_quad else EXACT)

    adaptive, labels = [], []
    for q in qs:
        if q == 1:
            rep.W[q] = 1.0
            adaptive.append(lambda h: xlogy(h, h))
            labels.append(("S", q))
            if dual:
                rep.Y[q] = 1.0
                adaptive.append(lambda h: xlogy(1.0 - h, 1.0 - h))
                labels.append(("Z", q))
        elif _is_int(q):
            if force_quad:
                grid = QuadratureGrid.exact_for(tj, q)
                w, y = _integrals(state, [lambda h, q=q: h ** q, lambda h, q=q: (1.0 - h) ** q], grid)
                rep.W[q] = n * w
                if dual:
                    rep.Y[q] = n / (n - 1) * y
            else:
                rep.W[q] = moment_exact(state, int(q))
                if dual:
                    rep.Y[q] = dual_moment_exact(state, int(q))
        else:
            adaptive.append(lambda h, q=q: h ** q)
            labels.append(("W", q))
            if dual:
                adaptive.append(lambda h, q=q: (1.0 - h) ** q)
                labels.append(("Y", q))
    if adaptive:
        rep.method = QUADRATURE
        vals = _integrals(state, adaptive, rtol=rtol)
        for (kind, q), v in zip(labels, vals):
            if kind == "S":
                rep.S[q] = -n * float(v)
            elif kind == "Z":
                rep.Z[q] = -n / (n - 1) * float(v)
            elif kind == "W":
                rep.W[q] = n * float(v)
            else:
                rep.Y[q] = n / (n - 1) * float(v)
    for q in qs:
        if q != 1:
            rep.S[q] = math.log(rep.W[q]) / (1.0 - q)
            if dual:
                rep.Z[q] = math.log(rep.Y[q]) / (1.0 - q)
    if 2.0 in rep.W:
        rep.R = 1.0 / rep.W[2.0]
        if dual:
            rep.T = 1.0 / rep.Y[2.0]
    elif not force_quad:
        rep.R = participation(state)
        if dual:
            rep.T = dual_participation(state)
    return rep


# ---------------------------------------------------------------------------
# closed forms


def coherent_moment(twice_j: int, q: float) -> float:
    return (twice_j + 1) / (q * twice_j + 1)


def coherent_dual_moment(twice_j: int, q: float) -> float:
    _check_dual(twice_j)
    a = 1.0 / twice_j
    return math.exp(gammaln(q + 1.0) + gammaln(a + 2.0) - gammaln(q + 1.0 + a))


def coherent_closed_forms(twice_j: int, q: float) -> MeasureReport:
    """Closed-form measures of any coherent state at Renyi index ``q``."""
    _check_q(q)
    _check_dual(twice_j)
    q = float(q)
    tj = twice_j
    w = coherent_moment(tj, q)
    y = coherent_dual_moment(tj, q)
    if q == 1:
        s = tj / (tj + 1)
        z = float(digamma((2 * tj + 1) / tj)) + np.euler_gamma - 1.0
    else:
        s = math.log(w) / (1.0 - q)
        z = math.log(y) / (1.0 - q)
    return MeasureReport({q: w}, {q: s}, {q: y}, {q: z},
                         R=(2 * tj + 1) / (tj + 1), T=(2 * tj + 1) / (2 * tj),
                         method=CLOSED_FORM)


def jz_closed_forms(twice_j: int, m, q: int) -> MeasureReport:
    """Closed-form moment, entropy and participation ratio of ``|m>``.

    ``q`` must be a positive integer; for ``q = 1`` the Wehrl entropy is
    given through digamma functions.
    """
    tj = twice_j
    twice_m = round(2 * m)
    if abs(2 * m - twice_m) > 1e-12 or abs(twice_m) > tj or (tj - twice_m) % 2:
        raise ValueError(f"m={m} out of range for j={tj / 2}")
    if not _is_int(q) or q < 1:
        raise ValueError("jz_closed_forms needs an integer q >= 1")
    q = int(q)
    k = (tj - twice_m) // 2  # j - m
    jp = tj - k  # j + m
    rep = MeasureReport(method=CLOSED_FORM)
    rep.R = float(Fraction(2 * tj + 1, tj + 1) * Fraction(math.comb(2 * tj, 2 * k),
                                                          math.comb(tj, k) ** 2))
    if q == 1:
        rep.W[1.0] = 1.0
        rep.S[1.0] = (tj / (tj + 1) - math.log(math.comb(tj, k))
                      + tj * digamma(tj + 1.0) - jp * digamma(jp + 1.0) - k * digamma(k + 1.0))
    else:
        w = Fraction(tj + 1, q * tj + 1) * Fraction(math.comb(tj, k) ** q, math.comb(q * tj, q * k))
        rep.W[float(q)] = float(w)
        rep.S[float(q)] = math.log(float(w)) / (1.0 - q)
    return rep


def sud_coherent_wehrl(d: int, m: int) -> float:
    """Wehrl entropy of an SU(d) coherent state in the rank-``m`` symmetric irrep."""
    if int(d) != d or d < 2 or int(m) != m or m < 1:
        raise ValueError("need integers d >= 2 and m >= 1")
    return m * float(digamma(m + d) - digamma(m + 1))


# ---------------------------------------------------------------------------
# series identities


def z_from_w_series(state: PureState, n_max: int = 2000, tol: float = 1e-12):
    """Dual Wehrl entropy from the integer moments.

    ``Z = (1 - sum_{n>=2} W(n) / (n (n-1))) / (2j)``.  With ``h`` an upper
    bound on the Husimi function, ``W(n+1) <= h W(n)``, so the terms after
    ``n = M`` add up to at most ``W(M) min(1/M, h / ((1-h) M (M+1)))``.  The
    partial sum is returned with that bound (divided by ``2j``); the true
    value lies in ``[value - bound, value]``.  Summation stops once the bound
    falls below ``tol``.  For coherent states ``h = 1`` and the bound only
    decays like ``1/M``.
    """
    _check_dual(state.twice_j)
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    tj = state.twice_j
    # margin so that an optimiser falling short of the maximum keeps the bound valid
    h = min(1.0, husimi_maximum(state)[1] + 1e-6)
    terms = []
    bound = math.inf
    for n, w in enumerate(_moment_sequence(state, n_max), start=1):
        if n == 1:
            continue
        terms.append(w / (n * (n - 1)))
        tail = w / n if h >= 1.0 else min(w / n, w * h / ((1.0 - h) * n * (n + 1)))
        bound = tail / tj
        if bound < tol:
            break
    return (1.0 - math.fsum(terms)) / tj, bound


def s_from_y_series(state: PureState, n_max: int = 100):
    """Wehrl entropy from the integer dual moments.

    ``S = 2j (1 - sum_{n>=2} Y(n) / (n (n-1)))``.  The dual moments are
    evaluated on a grid exact up to degree ``n_max``; the tail is bounded
    by ``2j Y(n_max) / n_max``.
    """
    _check_dual(state.twice_j)
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    tj = state.twice_j
    n_states = state.dim
    grid = QuadratureGrid.exact_for(tj, n_max)
    comp = 1.0 - np.clip(husimi_polar(state.coeffs, tj, grid.theta, grid.phi), 0.0, 1.0)
    power = comp * grid.weights
    terms = []
    y = 1.0
    for n in range(2, n_max + 1):
        power = power * comp
        y = n_states / (n_states - 1) * float(np.sum(power))
        terms.append(y / (n * (n - 1)))
    return tj * (1.0 - math.fsum(terms)), tj * y / n_max
