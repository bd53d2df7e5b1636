"""Unitary evolution of spin states and the rate of change of their entropies.

Time is measured in inverse energy units (``hbar = 1``).  Derivatives of
the Husimi function come from the overlaps ``w = <gamma|psi>``,
``v = <gamma|H psi>`` and ``u = <gamma|H^2 psi>``:

    dH/dt   = 2 Im(conj(w) v)
    d2H/dt2 = 2 |v|**2 - 2 Re(conj(w) u)

which are then integrated over the sphere like the measures themselves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import (
    dual_entropy, dual_moment, moment, renyi_entropy, _check_dual, _check_q, _is_int,
)
from .quadrature import ConvergenceError, QuadratureGrid, integrate_adaptive
from .spin import (
    PureState, SpherePoint, amplitudes_from_state, apply_su2, as_point, coherent_state,
    coherent_table, log_binom, roots_from_state, singular_nodes, state_from_amplitudes,
)

KINDS = ("S", "W", "Z", "Y")
HERMITIAN_TOL = 1e-12


# ---------------------------------------------------------------------------
# operators


def generators(twice_j: int) -> dict:
    """``Jz``, ``Jplus`` and ``Jminus`` in the ``|m>`` basis, ``m = j`` first."""
    j = twice_j / 2.0
    m = j - np.arange(twice_j + 1)
    jz = np.diag(m).astype(complex)
    jp = np.zeros((twice_j + 1, twice_j + 1), dtype=complex)
    # J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits one row up
    idx = np.arange(1, twice_j + 1)
    jp[idx - 1, idx] = np.sqrt(j * (j + 1) - m[idx] * (m[idx] + 1))
    return {"Jz": jz, "Jplus": jp, "Jminus": jp.conj().T}


@dataclass(frozen=True, eq=False)
class SpinHamiltonian:
    """Hermitian operator on the spin-j space, in the ``|m>`` basis."""

    twice_j: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        h = np.array(self.matrix, dtype=complex)
        n = int(self.twice_j) + 1
        if h.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix for twice_j={self.twice_j}")
        scale = max(1.0, float(np.max(np.abs(h))))
        if np.max(np.abs(h - h.conj().T)) > HERMITIAN_TOL * scale:
            raise ValueError("Hamiltonian is not hermitian")
        h = 0.5 * (h + h.conj().T)
        h.setflags(write=False)
        object.__setattr__(self, "twice_j", int(self.twice_j))
        object.__setattr__(self, "matrix", h)

    @classmethod
    def jz(cls, twice_j: int) -> SpinHamiltonian:
        return cls(twice_j, generators(twice_j)["Jz"])

    @classmethod
    def jx(cls, twice_j: int) -> SpinHamiltonian:
        g = generators(twice_j)
        return cls(twice_j, 0.5 * (g["Jplus"] + g["Jminus"]))

    @classmethod
    def rotation(cls, twice_j: int, a: float, b: complex) -> SpinHamiltonian:
        """``a Jz + b J+ + conj(b) J-``, which generates rotations."""
        g = generators(twice_j)
        b = complex(b)
        return cls(twice_j, a * g["Jz"] + b * g["Jplus"] + b.conjugate() * g["Jminus"])

    @classmethod
    def random(cls, twice_j: int, rng=None) -> SpinHamiltonian:
        """Gaussian hermitian matrix, unit variance on and off the diagonal."""
        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        n = twice_j + 1
        a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
        h = np.triu(a, 1)
        h = h + h.conj().T + np.diag(rng.standard_normal(n))
        return cls(twice_j, h)

    def apply(self, state: PureState) -> np.ndarray:
        """Amplitudes of ``H |psi>`` (not normalised)."""
        return self.matrix @ amplitudes_from_state(state)


def _check_h(state: PureState, hamiltonian: SpinHamiltonian):
    if hamiltonian.twice_j != state.twice_j:
        raise ValueError("state and Hamiltonian have different spin")


def evolve(state: PureState, hamiltonian: SpinHamiltonian, t: float) -> PureState:
    """``exp(-i H t) |psi>`` by eigendecomposition (global phase kept)."""
    _check_h(state, hamiltonian)
    evals, evecs = np.linalg.eigh(hamiltonian.matrix)
    a = amplitudes_from_state(state)
    a_t = evecs @ (np.exp(-1j * evals * t) * (evecs.conj().T @ a))
    return state_from_amplitudes(a_t)


# ---------------------------------------------------------------------------
# pointwise derivatives


def _overlaps(vectors, twice_j: int, theta, phi) -> np.ndarray:
    """``<gamma|x>`` for each amplitude vector ``x`` (rows) on polar nodes."""
    sq = np.exp(0.5 * log_binom(twice_j, np.arange(twice_j + 1)))
    return (np.asarray(vectors) * sq) @ np.conj(coherent_table(twice_j, theta, phi))


def _husimi_derivatives(state: PureState, hamiltonian: SpinHamiltonian, theta, phi, order=1):
    a = amplitudes_from_state(state)
    ha = hamiltonian.matrix @ a
    vecs = [a, ha] if order == 1 else [a, ha, hamiltonian.matrix @ ha]
    return _overlaps(vecs, state.twice_j, theta, phi)


def husimi_time_derivative(state: PureState, hamiltonian: SpinHamiltonian, point) -> float:
    """``dH/dt = 2 Im(conj(<gamma|psi>) <gamma|H psi>)`` at a point of the sphere."""
    _check_h(state, hamiltonian)
    p = as_point(point)
    w, v = _husimi_derivatives(state, hamiltonian, [p.theta], [p.phi])[:, 0]
    return float(2.0 * (np.conj(w) * v).imag)


def husimi_second_time_derivative(state: PureState, hamiltonian: SpinHamiltonian, point) -> float:
    _check_h(state, hamiltonian)
    p = as_point(point)
    w, v, u = _husimi_derivatives(state, hamiltonian, [p.theta], [p.phi], order=2)[:, 0]
    return float(2.0 * abs(v) ** 2 - 2.0 * (np.conj(w) * u).real)


def bargmann_time_derivative(state: PureState, hamiltonian: SpinHamiltonian, gamma):
    """``d psi(gamma)/dt``, which equals ``i`` times the Bargmann function of ``H psi``."""
    _check_h(state, hamiltonian)
    n = state.twice_j
    f = np.exp(0.5 * log_binom(n, np.arange(n + 1))) * np.conj(hamiltonian.apply(state))
    return 1j * np.polyval(f[::-1], gamma)


# ---------------------------------------------------------------------------
# rates of the measures


def _integrate(state, func, degree, rtol):
    """Integrate ``func(theta, phi)`` (array of shape (n,) or (n, k))."""
    if degree is not None:
        grid = QuadratureGrid.exact_for(state.twice_j, degree)
        return np.asarray(func(grid.theta, grid.phi)).T @ grid.weights
    return integrate_adaptive(func, rtol=rtol, atol=1e-15, points=singular_nodes(state))


def _safe_power(h, p):
    out = np.zeros_like(h)
    nz = h > 0
    out[nz] = h[nz] ** p
    return out


def _raw_rate(state, hamiltonian, q, kind, rtol):
    """Derivative of ``W`` / ``Y`` (or of ``S`` / ``Z`` at q = 1)."""
    n = state.dim

    def dh_and_h(theta, phi):
        w, v = _husimi_derivatives(state, hamiltonian, theta, phi)
        return 2.0 * (np.conj(w) * v).imag, np.clip(np.abs(w) ** 2, 0.0, 1.0)

    if kind == "W":
        def f(th, ph):
            dh, h = dh_and_h(th, ph)
            return q * n * _safe_power(h, q - 1.0) * dh
        degree = q if _is_int(q) else None
    elif kind == "Y":
        def f(th, ph):
            dh, h = dh_and_h(th, ph)
            return -q * n / (n - 1) * _safe_power(1.0 - h, q - 1.0) * dh
        degree = q if _is_int(q) else None
    elif kind == "S":
        def f(th, ph):
            dh, h = dh_and_h(th, ph)
            return -n * dh * np.where(h > 0, np.log(np.where(h > 0, h, 1.0)), 0.0)
        degree = None
    else:
        def f(th, ph):
            dh, h = dh_and_h(th, ph)
            return n / (n - 1) * dh * np.where(h < 1, np.log1p(-np.where(h < 1, h, 0.0)), 0.0)
        degree = None
    return float(_integrate(state, f, degree, rtol))


def entropy_rate(state: PureState, hamiltonian: SpinHamiltonian, q: float, kind: str = "S",
                 rtol: float = 1e-10) -> float:
    """Time derivative of ``S(q)``, ``W(q)``, ``Z(q)`` or ``Y(q)`` at ``t = 0``."""
    _check_q(q)
    _check_h(state, hamiltonian)
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if kind in ("Z", "Y"):
        _check_dual(state.twice_j)
    if kind in ("W", "Y"):
        return _raw_rate(state, hamiltonian, q, kind, rtol)
    if q == 1:
        return _raw_rate(state, hamiltonian, q, kind, rtol)
    if kind == "S":
        return _raw_rate(state, hamiltonian, q, "W", rtol) / ((1.0 - q) * moment(state, q))
    return _raw_rate(state, hamiltonian, q, "Y", rtol) / ((1.0 - q) * dual_moment(state, q))


def measure_value(state: PureState, q: float, kind: str) -> float:
    """The measure whose rate :func:`entropy_rate` returns."""
    return {"S": renyi_entropy, "W": moment, "Z": dual_entropy, "Y": dual_moment}[kind](state, q)


def finite_difference_rate(state: PureState, hamiltonian: SpinHamiltonian, q: float,
                           kind: str = "S", h: float = 2e-3) -> float:
    """Richardson-extrapolated central difference of the measure along the flow."""
    vals = {s: measure_value(evolve(state, hamiltonian, s * h), q, kind)
            for s in (-1.0, -0.5, 0.5, 1.0)}
    d1 = (vals[1.0] - vals[-1.0]) / (2.0 * h)
    d2 = (vals[0.5] - vals[-0.5]) / h
    return (4.0 * d2 - d1) / 3.0


def _leading_zeros(coeffs: np.ndarray, rel: float = 1e-6) -> int:
    big = np.flatnonzero(np.abs(coeffs) > rel * np.abs(coeffs).max())
    return int(big[0]) if big.size else coeffs.shape[0]


def _zero_orders(state: PureState, hamiltonian: SpinHamiltonian, cluster: float = 1e-3):
    """Distinct zeros of psi with their multiplicity and the vanishing order of ``<gamma|H psi>``.

    Numerically computed roots of multiplicity ``m`` scatter by about
    ``eps**(1/m)``, so roots closer than ``cluster`` (chordal) are merged.
    """
    groups = []
    for vec in roots_from_state(state).unit_vectors():
        for g in groups:
            if np.linalg.norm(g[0] / g[1] - vec) < cluster:
                g[0] = g[0] + vec
                g[1] += 1
                break
        else:
            groups.append([vec.copy(), 1])
    hv = hamiltonian.apply(state)
    nrm = np.linalg.norm(hv)
    out = []
    for total, mult in groups:
        p = SpherePoint.from_vector(total)
        if nrm < 1e-14:
            order = state.twice_j + 1
        else:
            # turn p to the north pole and count vanishing leading coefficients
            turned = apply_su2(_to_north(p), state_from_amplitudes(hv / nrm))
            order = _leading_zeros(turned.coeffs)
        out.append((p, mult, order))
    return out


def spin_matrix(matrix, twice_j: int) -> np.ndarray:
    """Unitary on the ``|m>`` amplitudes induced by a Moebius matrix (see :func:`apply_su2`)."""
    n = twice_j + 1
    cols = [amplitudes_from_state(apply_su2(matrix, state_from_amplitudes(np.eye(n)[k])))
            for k in range(n)]
    return np.column_stack(cols)


def _to_north(p: SpherePoint) -> np.ndarray:
    """Moebius matrix of a rotation taking ``p`` to the north pole."""
    th, ph = p.theta, p.phi
    c, s = math.cos(th / 2.0), math.sin(th / 2.0)
    turn = np.array([[c, -s], [s, c]], dtype=complex)
    return turn @ np.diag([np.exp(-0.5j * ph), np.exp(0.5j * ph)])


def moment_second_derivative(state: PureState, hamiltonian: SpinHamiltonian, q: float,
                             kind: str = "W", rtol: float = 1e-9) -> float:
    """Second time derivative of ``W(q)`` or ``Y(q)`` at ``t = 0``.

    For ``q < 1`` the integrand ``H**(q-1) d2H/dt2`` is not integrable at a
    zero of multiplicity ``m`` where ``<gamma|H psi>`` vanishes to order
    ``r`` when ``m (1 - q) >= r + 1``; the derivative is then ``+inf``.
    Integer ``q`` is integrated exactly.  Other ``q`` use adaptive cubature
    with the highest-multiplicity zero rotated to the south pole; close to
    the integrability threshold the tolerance is relaxed to ``1e-6``.
    """
    _check_q(q)
    _check_h(state, hamiltonian)
    if kind not in ("W", "Y"):
        raise ValueError("kind must be 'W' or 'Y'")
    n = state.dim
    if kind == "Y":
        _check_dual(state.twice_j)
    smooth = not _is_int(q)
    if smooth:
        zeros = _zero_orders(state, hamiltonian)
        if kind == "W" and q < 1:
            for _, mult, order in zeros:
                if mult * (1.0 - q) >= order + 1:
                    return math.inf
        # put the worst zero at the south pole, where the substitution tames it
        worst = max(zeros, key=lambda z: z[1])[0] if zeros else None
        if worst is not None and not worst.at_infinity:
            m = _to_north(worst.antipode())
            d = spin_matrix(m, state.twice_j)
            state = apply_su2(m, state)
            hamiltonian = SpinHamiltonian(state.twice_j, d @ hamiltonian.matrix @ d.conj().T)

    def f(theta, phi):
        w, v, u = _husimi_derivatives(state, hamiltonian, theta, phi, order=2)
        h = np.clip(np.abs(w) ** 2, 0.0, 1.0)
        ddh = 2.0 * np.abs(v) ** 2 - 2.0 * (np.conj(w) * u).real
        if kind == "W":
            aw = np.abs(w)
            what = np.where(aw > 0, np.conj(w) / np.where(aw > 0, aw, 1.0), 0.0)
            dh2_over_h = 4.0 * (what * v).imag ** 2
            return q * n * _safe_power(h, q - 1.0) * ((q - 1.0) * dh2_over_h + ddh)
        dh = 2.0 * (np.conj(w) * v).imag
        c = 1.0 - h
        return q * n / (n - 1) * ((q - 1.0) * _safe_power(c, q - 2.0) * dh ** 2
                                  - _safe_power(c, q - 1.0) * ddh)

    if not smooth:
        return float(_integrate(state, f, q, rtol))
    cuts = singular_nodes(state)
    try:
        return float(integrate_adaptive(f, rtol=rtol, atol=1e-12, smooth_poles=True, points=cuts))
    except ConvergenceError:
        # close to the integrability threshold the singularity is too strong
        # for the requested tolerance; settle for a coarser one
        return float(integrate_adaptive(f, rtol=1e-6, atol=1e-9, smooth_poles=True, points=cuts))


# ---------------------------------------------------------------------------
# reports


@dataclass
class ExtremalityReport:
    twice_j: int
    qs: list
    first: np.ndarray  # (n_hamiltonians, len(qs)), dW/dt
    second: np.ndarray  # (n_hamiltonians, len(qs)), d2W/dt2
    tol: float = 1e-8

    @property
    def first_ok(self) -> bool:
        return bool(np.all(np.abs(self.first) < self.tol))

    @property
    def second_ok(self) -> bool:
        ok = True
        for i, q in enumerate(self.qs):
            col = self.second[:, i]
            if q > 1:
                ok &= bool(np.all(col <= self.tol))
            elif q < 1:
                ok &= bool(np.all(col >= -self.tol))
        return ok

    @property
    def passed(self) -> bool:
        return self.first_ok and self.second_ok


def extremality_report(twice_j: int, q_list, n_hamiltonians: int, rng=None,
                       tol: float = 1e-8) -> ExtremalityReport:
    """Derivatives of ``W(q)`` at the north-pole coherent state for random Hamiltonians."""
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    state = coherent_state(0, twice_j)
    qs = [float(q) for q in q_list]
    first = np.zeros((n_hamiltonians, len(qs)))
    second = np.zeros((n_hamiltonians, len(qs)))
    for i in range(n_hamiltonians):
        ham = SpinHamiltonian.random(twice_j, rng)
        for k, q in enumerate(qs):
            first[i, k] = entropy_rate(state, ham, q, "W")
            second[i, k] = moment_second_derivative(state, ham, q, "W")
    return ExtremalityReport(twice_j, qs, first, second, tol)


@dataclass
class EntropyTimeSeries:
    """Measures along a trajectory, with analytic and finite-difference rates."""

    times: np.ndarray
    qs: list
    S: np.ndarray  # (n_times, n_q)
    W: np.ndarray
    dS_dt: np.ndarray
    dS_dt_fd: np.ndarray

    def rows(self) -> list[dict]:
        out = []
        for i, t in enumerate(self.times):
            for k, q in enumerate(self.qs):
                out.append({"t": float(t), "q": q, "S": float(self.S[i, k]), "W": float(self.W[i, k]),
                            "dS_dt_analytic": float(self.dS_dt[i, k]),
                            "dS_dt_fd": float(self.dS_dt_fd[i, k])})
        return out


def time_series(state: PureState, hamiltonian: SpinHamiltonian, t_max: float, n_steps: int,
                qs, finite_differences: bool = True) -> EntropyTimeSeries:
    if n_steps < 1 or not t_max > 0:
        raise ValueError("need t_max > 0 and n_steps >= 1")
    times = np.linspace(0.0, t_max, n_steps + 1)
    qs = [float(q) for q in qs]
    shape = (times.size, len(qs))
    S, W, dS, fd = (np.full(shape, np.nan) for _ in range(4))
    for i, t in enumerate(times):
        st = evolve(state, hamiltonian, t)
        for k, q in enumerate(qs):
            S[i, k] = renyi_entropy(st, q)
            W[i, k] = moment(st, q) if q != 1 else 1.0
            dS[i, k] = entropy_rate(st, hamiltonian, q, "S")
            if finite_differences:
                fd[i, k] = finite_difference_rate(st, hamiltonian, q, "S")
    return EntropyTimeSeries(times, qs, S, W, dS, fd)
