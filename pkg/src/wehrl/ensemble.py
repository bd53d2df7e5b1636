"""Haar-random pure states and their mean localisation measures.

A Haar-random state of dimension ``N`` is a normalised vector of
independent standard complex Gaussians.  Its mean moments are
``<W(q)> = N Gamma(N) Gamma(q+1) / Gamma(q+N)`` and its mean Wehrl
entropy is the harmonic tail ``sum_{n=2}^N 1/n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma, gammaln, xlogy

from .entropy import moment_exact
from .quadrature import QuadratureGrid
from .spin import PureState, coherent_table, log_binom, state_from_amplitudes

MEASURES = ("S", "W", "L2sq")


@dataclass(frozen=True)
class McEstimate:
    """Monte-Carlo mean with its standard error."""

    mean: float
    std_error: float
    n_samples: int
    seed: int | None
    exact: float = math.nan

    @property
    def z_score(self) -> float:
        if self.std_error == 0.0:
            return 0.0 if self.mean == self.exact else math.copysign(math.inf, self.mean - self.exact)
        return (self.mean - self.exact) / self.std_error

    def agrees(self, sigmas: float = 3.0) -> bool:
        return abs(self.z_score) < sigmas


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def _seed_of(rng) -> int | None:
    return None if isinstance(rng, np.random.Generator) else (None if rng is None else int(rng))


def random_amplitudes(dim: int, size: int | None, rng) -> np.ndarray:
    """Normalised complex Gaussian vectors, one per row."""
    rng = _rng(rng)
    shape = (dim,) if size is None else (size, dim)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def haar_random_state(twice_j: int, rng=None) -> PureState:
    """Pure state distributed by the unitarily invariant measure."""
    return state_from_amplitudes(random_amplitudes(twice_j + 1, None, rng))


def _check_dim(n):
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n}")


def expected_moment(n: int, q: float) -> float:
    """Haar average ``<W(q)> = N Gamma(N) Gamma(q+1) / Gamma(q+N)``."""
    _check_dim(n)
    if not q > 0:
        raise ValueError("q must be positive")
    return math.exp(math.log(n) + gammaln(n) + gammaln(q + 1.0) - gammaln(q + n))


def expected_wehrl(n: int) -> float:
    """Haar average of the Wehrl entropy, ``digamma(N+1) - digamma(2)``."""
    _check_dim(n)
    return float(digamma(n + 1.0) - digamma(2.0))


def expected_renyi(n: int, q: float) -> float:
    """``(1-q)**-1 log[Gamma(N+1) Gamma(q+1) / Gamma(q+N)]``; ``q = 1`` is :func:`expected_wehrl`."""
    _check_dim(n)
    if not q > 0:
        raise ValueError("q must be positive")
    if q == 1:
        return expected_wehrl(n)
    return (gammaln(n + 1.0) + gammaln(q + 1.0) - gammaln(q + n)) / (1.0 - q)


def expected_l2_squared(n: int) -> float:
    """Haar average of the squared L2 distance to the uniform Husimi function."""
    _check_dim(n)
    return (n - 1) / (n * (n + 1))


def l2_squared(state: PureState) -> float:
    """``N int (H - 1/N)**2 dmu = W(2) - 1/N``, from the exact moment."""
    return max(moment_exact(state, 2) - 1.0 / state.dim, 0.0)


def l2_to_uniform(state: PureState) -> float:
    """L2 distance between the Husimi function and the uniform ``1/N``."""
    return math.sqrt(l2_squared(state))


def l2_to_uniform_quadrature(state: PureState) -> float:
    """Same distance integrated directly on an exact grid."""
    grid = QuadratureGrid.exact_for(state.twice_j, 2)
    h = np.abs(state.coeffs @ coherent_table(state.twice_j, grid.theta, grid.phi)) ** 2
    return math.sqrt(state.dim * grid.integrate((h - 1.0 / state.dim) ** 2))


def _sample_values(twice_j: int, q: float, measure: str, amps: np.ndarray,
                   grid: QuadratureGrid, table: np.ndarray) -> np.ndarray:
    n = twice_j + 1
    coeffs = np.conj(amps) * np.exp(0.5 * log_binom(twice_j, np.arange(n)))
    if measure == "W" and float(q).is_integer():
        return np.array([moment_exact(PureState(twice_j, c), int(q)) for c in coeffs])
    h = np.abs(coeffs @ table) ** 2
    if measure == "L2sq":
        return n * ((h - 1.0 / n) ** 2) @ grid.weights
    if measure == "S" and q == 1:
        return -n * xlogy(h, h) @ grid.weights
    return n * (h ** q) @ grid.weights


def mc_grid(twice_j: int, q: float, measure: str) -> QuadratureGrid:
    """Grid used for Monte-Carlo samples.

    Exact for integer ``q`` (and for ``L2sq``); otherwise a fixed grid
    whose error on ``H log H`` is far below the sampling error.
    """
    if measure == "L2sq":
        return QuadratureGrid.exact_for(twice_j, 2)
    if float(q).is_integer() and q > 1:
        return QuadratureGrid.exact_for(twice_j, q)
    n_u = max(64, 4 * (twice_j + 1))
    return QuadratureGrid(n_u, 2 * n_u)


def mc_mean_measure(twice_j: int, q: float, n_samples: int, rng=None,
                    measure: str = "S", chunk: int = 512) -> McEstimate:
    """Monte-Carlo mean of ``S(q)``, ``W(q)`` or ``L2sq`` over Haar-random states.

    ``rng`` is a seed (recorded in the result) or a ``Generator``.  The
    exact Haar average is attached for comparison.

    For ``q != 1`` the entropy average is the entropy of the averaged
    moment, ``ln<W(q)> / (1 - q)``, which is what :func:`expected_renyi`
    returns; the sample mean of ``S(q)`` itself is smaller by Jensen's
    inequality.  Its standard error follows from that of ``<W(q)>`` by
    the delta method.
    """
    if measure not in MEASURES:
        raise ValueError(f"measure must be one of {MEASURES}")
    if n_samples < 2:
        raise ValueError("need at least two samples")
    if not q > 0:
        raise ValueError("q must be positive")
    n = twice_j + 1
    seed = _seed_of(rng)
    gen = _rng(rng)
    grid = mc_grid(twice_j, q, measure)
    table = coherent_table(twice_j, grid.theta, grid.phi)
    vals = []
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        vals.append(_sample_values(twice_j, q, measure, random_amplitudes(n, m, gen), grid, table))
        done += m
    x = np.concatenate(vals)
    if measure == "S":
        exact = expected_renyi(n, q) if n >= 2 else 0.0
    elif measure == "W":
        exact = expected_moment(n, q) if n >= 2 else 1.0
    else:
        exact = expected_l2_squared(n) if n >= 2 else 0.0
    mean = math.fsum(x) / x.size
    std = float(np.std(x, ddof=1)) / math.sqrt(x.size)
    if std < 1e-13 * max(abs(mean), 1.0):
        std = 0.0
    if measure == "S" and q != 1:
        mean, std = math.log(mean) / (1.0 - q), std / (abs(1.0 - q) * mean)
    return McEstimate(mean, std, int(x.size), seed, exact)
