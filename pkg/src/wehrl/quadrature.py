"""Integration over the Bloch sphere against the normalised measure.

``dmu = sin(theta) dtheta dphi / (4 pi)``, so that ``int 1 dmu = 1``.

Two rules are provided.  :class:`QuadratureGrid` is a Gauss-Legendre rule in
``u = cos(theta)`` times the uniform rule in ``phi``; it is exact for the
integrands that appear for integer Renyi index.  :func:`integrate_adaptive`
handles everything else (fractional powers and logarithms of the Husimi
function, which are singular at its zeros).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import cubature


class ConvergenceError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


@lru_cache(maxsize=64)
def _gauss_legendre(n: int):
    u, w = np.polynomial.legendre.leggauss(n)
    u.setflags(write=False)
    w.setflags(write=False)
    return u, w


@dataclass(frozen=True)
class QuadratureGrid:
    """Product rule on the sphere.

    Integrates ``P(u) * T(phi)`` exactly when ``P`` has degree at most
    ``2 n_u - 1`` and the trigonometric polynomial ``T`` has degree below
    ``n_phi``.
    """

    n_u: int
    n_phi: int
    theta: np.ndarray = field(init=False, repr=False)
    phi: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_u < 1 or self.n_phi < 1:
            raise ValueError("grid sizes must be positive")
        u, wu = _gauss_legendre(int(self.n_u))
        ph = 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi
        th = np.arccos(u)
        T, P = np.meshgrid(th, ph, indexing="ij")
        W = np.outer(0.5 * wu, np.full(self.n_phi, 1.0 / self.n_phi))
        for name, arr in (("theta", T.ravel()), ("phi", P.ravel()), ("weights", W.ravel())):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def exact_for(cls, twice_j: int, degree: int | float) -> QuadratureGrid:
        """Grid exact for polynomials of ``degree`` in the Husimi function.

        A product of ``degree`` Husimi factors is a polynomial of degree
        ``2 * degree * j`` in ``u`` (after the phi average) and a
        trigonometric polynomial of the same degree in ``phi``.
        """
        d = int(math.ceil(degree * twice_j))
        return cls(n_u=d // 2 + 1, n_phi=2 * d + 2)

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    def integrate(self, values) -> np.ndarray | float:
        """Weighted sum over the last axis of ``values``."""
        out = np.asarray(values) @ self.weights
        return float(out) if np.ndim(out) == 0 else out


def integrate_adaptive(func, rtol: float = 1e-10, atol: float = 1e-14,
                       max_subdivisions: int = 20000, smooth_poles: bool = False,
                       points=None):
    """Adaptive cubature of ``func(theta, phi)`` over the sphere.

    ``func`` receives 1-D arrays of polar angles and returns an array of
    shape ``(n,)`` or ``(n, k)``; the measure factor is applied here.  The
    integration runs in ``(theta, phi)`` rather than ``(u, phi)`` so that
    zeros of the Husimi function at the poles stay mild endpoint
    singularities.  With ``smooth_poles`` the polar angle is substituted
    as ``theta = pi / (1 + exp(-pi sinh(x)))`` (tanh-sinh), which makes
    integrable power-law singularities at the poles harmless.

    ``points`` are ``(theta, phi)`` pairs where ``func`` is not smooth
    (zeros of a Husimi function, say).  The domain is first cut along the
    coordinate lines through them, so each such point is a cell vertex and
    bisection homes in on it; an interior kink would otherwise spoil the
    error estimate.
    """
    half = 0.5 * math.pi

    def integrand(x):
        t, ph = x[:, 0], x[:, 1]
        if smooth_poles:
            u = half * np.sinh(t)
            th = math.pi / (1.0 + np.exp(-2.0 * u))
            rest = math.pi / (1.0 + np.exp(2.0 * u))  # pi - theta without cancellation
            jac = half * half * np.cosh(t) / np.cosh(u) ** 2
            w = np.where(th < half, np.sin(th), np.sin(rest)) * jac / (4.0 * math.pi)
        else:
            th = t
            w = np.sin(th) / (4.0 * math.pi)
        val = np.asarray(func(th, ph))
        return val * w.reshape((-1,) + (1,) * (val.ndim - 1))

    lo = -4.0 if smooth_poles else 0.0
    hi = 4.0 if smooth_poles else math.pi
    two_pi = 2.0 * math.pi
    inner = [(th, ph % two_pi) for th, ph in (points if points is not None else ())
             if 1e-12 < th < math.pi - 1e-12]  # poles are on the boundary already
    # the integrand is periodic in phi: start the range in the widest gap
    # between cut longitudes so that no cut sits on the seam
    start = 0.0
    if inner:
        phis = np.sort([ph for _, ph in inner])
        gaps = np.diff(np.append(phis, phis[0] + two_pi))
        i = int(np.argmax(gaps))
        start = float(phis[i] + 0.5 * gaps[i])
    t_cuts, p_cuts = [lo, hi], [start, start + two_pi]
    for th, ph in inner:
        if smooth_poles:
            th = math.asinh(-math.log(math.pi / th - 1.0) / math.pi)
        t_cuts.append(th)
        p_cuts.append(start + (ph - start) % two_pi)
    # tensor grid of the cut coordinates: every cut point is a cell vertex
    t_cuts, p_cuts = _merge_close(t_cuts), _merge_close(p_cuts)
    cells = [(np.array([t0, p0]), np.array([t1, p1]))
             for t0, t1 in zip(t_cuts[:-1], t_cuts[1:])
             for p0, p1 in zip(p_cuts[:-1], p_cuts[1:])]
    est, err = _global_adaptive(integrand, cells, rtol, atol, max_subdivisions)
    return float(est) if np.ndim(est) == 0 else np.asarray(est)


def _merge_close(vals, tol: float = 1e-12) -> list:
    out = []
    for v in sorted(vals):
        if not out or v - out[-1] > tol:
            out.append(v)
    return out


def _global_adaptive(integrand, cells, rtol, atol, max_subdivisions):
    """Globally adaptive bisection over rectangular ``cells``.

    Each cell is estimated by one Gauss-Kronrod (21 point) product rule;
    the cell with the largest error is split into four until the summed
    error meets ``atol + rtol * |estimate|`` componentwise.
    """
    heap = []
    count = 0

    def push(a, b):
        nonlocal count
        r = cubature(integrand, a, b, rule="gk21", atol=np.inf)  # rule only, no refinement
        e, er = np.asarray(r.estimate, dtype=float), np.abs(np.asarray(r.error, dtype=float))
        heapq.heappush(heap, (-float(np.max(er)), count, a, b, e, er))
        count += 1
        return e, er

    est = err = 0.0
    for a, b in cells:
        e, er = push(a, b)
        est, err = est + e, err + er
    done = 0
    while np.any(err > atol + rtol * np.abs(est)):
        if done >= max_subdivisions:
            raise ConvergenceError(
                f"adaptive quadrature stopped after {done} subdivisions "
                f"with error estimate {np.max(err):.3e}"
            )
        _, _, a, b, e, er = heapq.heappop(heap)
        est, err = est - e, err - er
        m = 0.5 * (a + b)
        for a2, b2 in (((a[0], a[1]), (m[0], m[1])), ((m[0], a[1]), (b[0], m[1])),
                       ((a[0], m[1]), (m[0], b[1])), ((m[0], m[1]), (b[0], b[1]))):
            e, er = push(np.array(a2), np.array(b2))
            est, err = est + e, err + er
        done += 1
        if done % 256 == 0:  # drop rounding drift of the running sums
            est = sum(c[4] for c in heap)
            err = sum(c[5] for c in heap)
    return est, err
