"""Spin-j pure states in the Bargmann representation.

A state of spin ``j`` is stored as the coefficient vector ``f_0 .. f_{2j}`` of
its Bargmann polynomial ``psi(gamma) = sum_k f_k gamma**k``.  Points on the
Bloch sphere are stereographic coordinates ``gamma`` with the south pole as
an explicit point at infinity.  Amplitudes in the ``|m>`` basis are ordered
with ``m = j`` first; the correspondence is ``f_k = sqrt(C(2j, k)) *
conj(a_k)`` where ``a_k`` is the amplitude of ``|j - k>``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

NORM_TOL = 1e-8
INFINITY_RADIUS = 1e10


def dimension(twice_j: int) -> int:
    """Hilbert space dimension ``N = 2j + 1``."""
    return check_twice_j(twice_j) + 1


def check_twice_j(twice_j) -> int:
    if isinstance(twice_j, bool) or int(twice_j) != twice_j or twice_j < 0:
        raise ValueError(f"twice_j must be a non-negative integer, got {twice_j!r}")
    return int(twice_j)


def log_binom(n, k):
    """Logarithm of the binomial coefficient, vectorised over ``k``."""
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def binom(n, k):
    return np.exp(log_binom(n, k))


# ---------------------------------------------------------------------------
# points on the sphere


@dataclass(frozen=True)
class SpherePoint:
    """A point of the Bloch sphere in stereographic coordinates.

    ``gamma = 0`` is the north pole; the south pole is represented by
    ``at_infinity=True`` rather than by a large number.
    """

    gamma: complex = 0j
    at_infinity: bool = False

    def __post_init__(self):
        g = complex(self.gamma)
        if self.at_infinity:
            g = complex("inf")
        elif not cmath.isfinite(g):
            raise ValueError("use SpherePoint.south_pole() for the point at infinity")
        object.__setattr__(self, "gamma", g)

    @classmethod
    def south_pole(cls) -> SpherePoint:
        return cls(0j, at_infinity=True)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> SpherePoint:
        if theta >= math.pi:
            return cls.south_pole()
        return cls(math.tan(theta / 2.0) * cmath.exp(-1j * phi))

    @classmethod
    def from_vector(cls, v) -> SpherePoint:
        x, y, z = (float(c) for c in np.asarray(v, dtype=float) / np.linalg.norm(v))
        if z >= 0.0:
            return cls(complex(x, -y) / (1.0 + z))
        if x == 0.0 and y == 0.0:
            return cls.south_pole()
        g = (1.0 - z) / complex(x, y)
        if abs(g) > INFINITY_RADIUS:
            return cls.south_pole()
        return cls(g)

    @property
    def theta(self) -> float:
        if self.at_infinity:
            return math.pi
        return 2.0 * math.atan(abs(self.gamma))

    @property
    def phi(self) -> float:
        # e^{i phi} = conj(gamma) / |gamma|; the poles get phi = 0
        if self.at_infinity or self.gamma == 0:
            return 0.0
        return (-cmath.phase(self.gamma)) % (2.0 * math.pi)

    def cos_theta(self) -> float:
        if self.at_infinity:
            return -1.0
        r2 = abs(self.gamma) ** 2
        return (1.0 - r2) / (1.0 + r2)

    def unit_vector(self) -> np.ndarray:
        if self.at_infinity:
            return np.array([0.0, 0.0, -1.0])
        g = self.gamma
        d = 1.0 + abs(g) ** 2
        return np.array([2.0 * g.real / d, -2.0 * g.imag / d, (2.0 - d) / d])

    def antipode(self) -> SpherePoint:
        if self.at_infinity:
            return SpherePoint(0j)
        if self.gamma == 0:
            return SpherePoint.south_pole()
        return SpherePoint(-1.0 / self.gamma.conjugate())

    def chordal_distance(self, other: SpherePoint) -> float:
        return float(np.linalg.norm(self.unit_vector() - other.unit_vector()))


def as_point(p) -> SpherePoint:
    """Coerce a complex number (``inf`` meaning the south pole) to a point."""
    if isinstance(p, SpherePoint):
        return p
    g = complex(p)
    if not cmath.isfinite(g):
        return SpherePoint.south_pole()
    return SpherePoint(g)


# ---------------------------------------------------------------------------
# states


def norm_squared(coeffs, twice_j: int) -> float:
    """Squared norm ``sum_k |f_k|**2 / C(2j, k)`` of a Bargmann vector."""
    c = np.asarray(coeffs)
    k = np.arange(twice_j + 1)
    return math.fsum(np.abs(c) ** 2 * np.exp(-log_binom(twice_j, k)))


def _canonical_phase(coeffs: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(coeffs) > 1e-14 * np.abs(coeffs).max())
    lead = coeffs[nz[0]]
    return coeffs * (abs(lead) / lead)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalised spin-j pure state given by its Bargmann coefficients.

    The plain constructor only validates.  Use :meth:`from_coeffs` to
    normalise an arbitrary coefficient vector and fix its global phase.
    """

    twice_j: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        tj = check_twice_j(self.twice_j)
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.shape[0] != tj + 1:
            raise ValueError(f"expected {tj + 1} coefficients for twice_j={tj}, got {c.shape[0]}")
        nrm = norm_squared(c, tj)
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm^2 = {nrm:.3e})")
        c.setflags(write=False)
        object.__setattr__(self, "twice_j", tj)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs, twice_j: int | None = None, canonical: bool = True) -> PureState:
        c = np.array(coeffs, dtype=complex).reshape(-1)
        if twice_j is None:
            twice_j = c.shape[0] - 1
        nrm = norm_squared(c, twice_j) if c.shape[0] == twice_j + 1 else 0.0
        if not nrm > 0.0:
            raise ValueError("cannot normalise a zero (or mis-sized) coefficient vector")
        c = c / math.sqrt(nrm)
        if canonical:
            c = _canonical_phase(c)
        return cls(twice_j, c)

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    @property
    def j(self) -> float:
        return self.twice_j / 2.0

    def __repr__(self):
        return f"PureState(twice_j={self.twice_j}, coeffs={np.array2string(self.coeffs, precision=4)})"

    def overlap(self, other: PureState) -> complex:
        """Inner product ``<self|other>`` computed from coefficients."""
        k = np.arange(self.twice_j + 1)
        w = np.exp(-log_binom(self.twice_j, k))
        # f_k = sqrt(C) conj(a_k): <a|b> = sum conj(a_k) b_k = sum f^a_k conj(f^b_k) / C
        return complex(np.sum(w * self.coeffs * np.conj(other.coeffs)))

    def fidelity(self, other: PureState) -> float:
        return abs(self.overlap(other)) ** 2

    def equals_up_to_phase(self, other: PureState, atol: float = 1e-10) -> bool:
        if other.twice_j != self.twice_j:
            return False
        ov = self.overlap(other)
        if abs(ov) < 0.5:
            return False
        ph = ov / abs(ov)
        return bool(np.allclose(self.coeffs, ph * other.coeffs, rtol=0.0, atol=atol))


def kernel(point, twice_j: int) -> float:
    """Squared norm ``(1 + |gamma|**2)**(2j)`` of the unnormalised coherent state."""
    p = as_point(point)
    if p.at_infinity:
        raise ValueError("kernel diverges at south pole")
    return math.exp(twice_j * math.log1p(abs(p.gamma) ** 2))


def coherent_state(point, twice_j: int) -> PureState:
    """Coherent state centred at ``point``.

    ``f_k = C(2j, k) conj(gamma)**k / (1 + |gamma|**2)**j``, evaluated as
    ``C(2j, k) cos(t/2)**(2j-k) sin(t/2)**k`` times a phase so that points
    close to the south pole do not overflow.
    """
    tj = check_twice_j(twice_j)
    p = as_point(point)
    k = np.arange(tj + 1)
    if p.at_infinity:
        c = np.zeros(tj + 1, dtype=complex)
        c[-1] = 1.0
        return PureState(tj, c)
    half = math.atan(abs(p.gamma))
    cs, sn = math.cos(half), math.sin(half)
    mag = binom(tj, k) * cs ** (tj - k) * sn ** k
    phase = np.exp(-1j * cmath.phase(p.gamma) * k)
    return PureState(tj, mag * phase)


def basis_state(m, twice_j: int) -> PureState:
    """The ``J_z`` eigenstate ``|m>``; ``m`` may be half-integer."""
    tj = check_twice_j(twice_j)
    twice_m = 2 * m
    if abs(twice_m - round(twice_m)) > 1e-12:
        raise ValueError(f"m={m} is not a half-integer")
    twice_m = int(round(twice_m))
    if abs(twice_m) > tj or (tj - twice_m) % 2:
        raise ValueError(f"m={m} out of range for j={tj / 2}")
    k = (tj - twice_m) // 2
    c = np.zeros(tj + 1, dtype=complex)
    c[k] = math.sqrt(math.comb(tj, k))
    return PureState(tj, c)


def bargmann_eval(state: PureState, gamma):
    """Evaluate the Bargmann polynomial by Horner's rule (vectorised)."""
    return np.polyval(state.coeffs[::-1], gamma)


def coherent_table(twice_j: int, theta, phi) -> np.ndarray:
    """Matrix ``T[k, p] = gamma_p**k / sqrt(K(gamma_p))`` on polar nodes.

    With ``gamma = tan(theta/2) exp(-i phi)`` this is ``cos(theta/2)**(2j-k)
    sin(theta/2)**k exp(-i k phi)``; ``coeffs @ T`` gives
    ``psi(gamma)/sqrt(K(gamma))`` without overflow.
    """
    a, b = _homogeneous(theta, phi)
    n = twice_j + 1
    pa = np.ones((n, a.size), dtype=complex)
    pb = np.ones((n, a.size))
    if twice_j:
        pa[1:] = np.cumprod(np.broadcast_to(a, (twice_j, a.size)), axis=0)
        pb[1:] = np.cumprod(np.broadcast_to(b, (twice_j, a.size)), axis=0)
    return pa * pb[::-1]


def _homogeneous(theta, phi):
    """``(sin(theta/2) e^{-i phi}, cos(theta/2))``, so that ``gamma = a / b``."""
    theta = np.asarray(theta, dtype=float).reshape(-1)
    phi = np.asarray(phi, dtype=float).reshape(-1)
    return np.sin(0.5 * theta) * np.exp(-1j * phi), np.cos(0.5 * theta)


def husimi_polar(coeffs, twice_j: int, theta, phi) -> np.ndarray:
    """Husimi function on arrays of polar angles.

    ``coeffs`` may be a single coefficient vector or a stack of them (one
    state per row); the result has shape ``(..., len(theta))``.
    """
    theta = np.asarray(theta, dtype=float)
    shape = theta.shape
    coeffs = np.asarray(coeffs)
    if coeffs.ndim == 1:
        # homogeneous Horner rule: sum_k f_k a**k b**(2j-k)
        a, b = _homogeneous(theta, phi)
        amp = np.full(a.shape, coeffs[twice_j], dtype=complex)
        bp = np.ones_like(b)
        for k in range(twice_j - 1, -1, -1):
            bp = bp * b
            amp = amp * a + coeffs[k] * bp
    else:
        amp = coeffs @ coherent_table(twice_j, theta, phi)
    h = amp.real ** 2 + amp.imag ** 2
    return h.reshape(h.shape[:-1] + shape)


def husimi_eval(state: PureState, point) -> float:
    """Husimi function ``|psi(gamma)|**2 / K(gamma)`` at a single point."""
    p = as_point(point)
    if p.at_infinity:
        return float(abs(state.coeffs[-1]) ** 2)
    return float(husimi_polar(state.coeffs, state.twice_j, [p.theta], [p.phi])[0])


# ---------------------------------------------------------------------------
# stellar representation


@dataclass(frozen=True, eq=False)
class StellarRoots:
    """Zeros of a Bargmann polynomial, with the south pole counted separately.

    ``prefactor`` is the leading coefficient of the reduced polynomial, so
    that ``psi(gamma) = prefactor * prod(gamma - r)`` over finite roots.
    """

    twice_j: int
    finite_roots: np.ndarray
    roots_at_infinity: int = 0
    prefactor: complex = 1.0

    def __post_init__(self):
        tj = check_twice_j(self.twice_j)
        r = np.array(self.finite_roots, dtype=complex).reshape(-1)
        m = int(self.roots_at_infinity)
        if m < 0 or r.shape[0] + m != tj:
            raise ValueError(
                f"root count mismatch: {r.shape[0]} finite + {m} at infinity != 2j = {tj}"
            )
        if not np.all(np.isfinite(r)):
            raise ValueError("finite_roots must be finite; count south-pole roots separately")
        r.setflags(write=False)
        object.__setattr__(self, "twice_j", tj)
        object.__setattr__(self, "finite_roots", r)
        object.__setattr__(self, "roots_at_infinity", m)

    @classmethod
    def from_points(cls, points, twice_j: int | None = None) -> StellarRoots:
        pts = [as_point(p) for p in points]
        fin = [p.gamma for p in pts if not p.at_infinity]
        m = sum(p.at_infinity for p in pts)
        return cls(len(pts) if twice_j is None else twice_j, fin, m)

    def points(self) -> list[SpherePoint]:
        pts = [SpherePoint(g) for g in self.finite_roots]
        return pts + [SpherePoint.south_pole()] * self.roots_at_infinity

    def unit_vectors(self) -> np.ndarray:
        if self.twice_j == 0:
            return np.zeros((0, 3))
        return np.array([p.unit_vector() for p in self.points()])


def roots_from_state(state: PureState, tol: float = 1e-10) -> StellarRoots:
    """Stellar representation of ``state``.

    Leading coefficients that vanish (relative to the amplitude scale) are
    south-pole roots; the remaining polynomial is solved by companion-matrix
    eigenvalues followed by one Newton step.  Finite roots beyond
    ``INFINITY_RADIUS`` are also counted as south-pole roots.
    """
    f = state.coeffs
    tj = state.twice_j
    amp = np.abs(f) * np.exp(-0.5 * log_binom(tj, np.arange(tj + 1)))
    if not amp.max() > 0:
        raise ValueError("all-zero coefficient vector has no stellar representation")
    significant = np.flatnonzero(amp > 1e-14 * amp.max())
    degree = int(significant[-1])
    if degree == 0:
        return StellarRoots(tj, [], tj, complex(f[0]))
    poly = f[: degree + 1][::-1]
    roots = np.roots(poly)
    dpoly = np.polyder(poly)
    for i, r in enumerate(roots):
        d = np.polyval(dpoly, r)
        if d != 0:
            cand = r - np.polyval(poly, r) / d
            if abs(np.polyval(poly, cand)) < abs(np.polyval(poly, r)):
                roots[i] = cand
    far = np.abs(roots) > min(INFINITY_RADIUS, 1.0 / tol)
    finite = roots[~far]
    return StellarRoots(tj, finite, tj - finite.shape[0], complex(f[degree]))


def state_from_roots(roots: StellarRoots) -> PureState:
    """Rebuild the normalised state whose Bargmann zeros are ``roots``."""
    tj = roots.twice_j
    c = np.zeros(tj + 1, dtype=complex)
    poly = np.poly(roots.finite_roots) if roots.finite_roots.size else np.array([1.0])
    c[: poly.shape[0]] = poly[::-1]
    return PureState.from_coeffs(c, tj)


# ---------------------------------------------------------------------------
# rotations


@dataclass(frozen=True)
class Rotation:
    """SU(2) element in the ``(alpha, phi)`` parametrisation.

    Acts on sphere points by ``gamma -> (gamma + alpha e^{i phi}) /
    (e^{i phi} - conj(alpha) gamma)``.
    """

    alpha: complex = 0j
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))

    def matrix(self) -> np.ndarray:
        """Defining (j = 1/2) representation."""
        a, p = self.alpha, self.phi
        s = math.sqrt(1.0 + abs(a) ** 2)
        e = cmath.exp(0.5j * p)
        return np.array(
            [[e / s, -a.conjugate() / e / s], [a * e / s, 1.0 / e / s]], dtype=complex
        )

    def su2(self) -> np.ndarray:
        """Unit-determinant matrix of the Moebius action on ``gamma``."""
        a, p = self.alpha, self.phi
        s = math.sqrt(1.0 + abs(a) ** 2)
        e = cmath.exp(0.5j * p)
        return np.array([[1.0 / e, a * e], [-a.conjugate() / e, e]], dtype=complex) / s

    @classmethod
    def from_su2(cls, u: complex, v: complex) -> Rotation:
        """Rotation with Moebius matrix ``[[u, v], [-conj(v), conj(u)]]``."""
        if abs(u) < 1e-14:
            raise ValueError("rotation not representable in (alpha, phi) form (u = 0)")
        return cls(v / u.conjugate(), -2.0 * cmath.phase(u))

    @classmethod
    def from_axis_angle(cls, axis, angle: float) -> Rotation:
        """Right-handed rotation of the sphere by ``angle`` about ``axis``."""
        n = np.asarray(axis, dtype=float)
        nx, ny, nz = n / np.linalg.norm(n)
        c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
        return cls.from_su2(complex(c, -nz * s), complex(ny * s, nx * s))

    def compose(self, first: Rotation) -> Rotation:
        """The rotation ``self o first`` (apply ``first``, then ``self``)."""
        m = self.su2() @ first.su2()
        return Rotation.from_su2(m[0, 0], m[0, 1])

    def inverse(self) -> Rotation:
        m = self.su2()
        return Rotation.from_su2(m[1, 1], -m[0, 1])


def mobius_rotate_point(rot: Rotation, point) -> SpherePoint:
    p = as_point(point)
    a, e = rot.alpha, cmath.exp(1j * rot.phi)
    if p.at_infinity:
        if a == 0:
            return SpherePoint.south_pole()
        return SpherePoint(-1.0 / a.conjugate())
    g = p.gamma
    den = e - a.conjugate() * g
    num = g + a * e
    if den == 0 or abs(num) > INFINITY_RADIUS * abs(den):
        return SpherePoint.south_pole()
    return SpherePoint(num / den)


def rotate_roots(rot: Rotation, roots: StellarRoots) -> StellarRoots:
    return StellarRoots.from_points(
        [mobius_rotate_point(rot, p) for p in roots.points()], roots.twice_j
    )


def apply_su2(matrix, state: PureState) -> PureState:
    """Act on ``state`` with the Moebius matrix ``[[u, v], [-conj(v), conj(u)]]``.

    ``psi'(gamma) = sum_k f_k (conj(u) gamma - v)**k (conj(v) gamma + u)**(2j-k)``,
    so that the zeros move by ``gamma -> (u gamma + v) / (-conj(v) gamma + conj(u))``.
    Unlike :class:`Rotation` this also covers the half turns with ``u = 0``.
    """
    m = np.asarray(matrix, dtype=complex)
    u, v = m[0, 0], m[0, 1]
    tj = state.twice_j
    lin_a = np.array([-v, u.conjugate()])  # lowest order first
    lin_b = np.array([u, v.conjugate()])
    pa = [np.array([1.0 + 0j])]
    pb = [np.array([1.0 + 0j])]
    for _ in range(tj):
        pa.append(np.convolve(pa[-1], lin_a))
        pb.append(np.convolve(pb[-1], lin_b))
    out = np.zeros(tj + 1, dtype=complex)
    for k, fk in enumerate(state.coeffs):
        if fk != 0:
            out += fk * np.convolve(pa[k], pb[tj - k])
    return PureState.from_coeffs(out, tj, canonical=False)


def rotate_state(rot: Rotation, state: PureState) -> PureState:
    """Apply a rotation to a state through its Bargmann polynomial.

    ``psi'(gamma) = (1 + conj(a) gamma)**(2j) (1 + |a|**2)**(-j) e^{-i phi j}
    psi((gamma - a) e^{i phi} / (1 + conj(a) gamma))``; the zeros move by
    :func:`mobius_rotate_point`.  The exact unitary action is returned,
    without phase canonicalisation.
    """
    return apply_su2(rot.su2(), state)


# ---------------------------------------------------------------------------
# |m> basis bridge


def amplitudes_from_state(state: PureState) -> np.ndarray:
    """Amplitudes in the ``|m>`` basis, ``m = j, j-1, ..., -j``."""
    k = np.arange(state.twice_j + 1)
    return np.conj(state.coeffs) * np.exp(-0.5 * log_binom(state.twice_j, k))


def state_from_amplitudes(amps, normalize: bool = False) -> PureState:
    a = np.asarray(amps, dtype=complex).reshape(-1)
    if a.size == 0:
        raise ValueError("empty amplitude vector")
    tj = a.shape[0] - 1
    if normalize:
        a = a / np.linalg.norm(a)
    k = np.arange(tj + 1)
    return PureState(tj, np.exp(0.5 * log_binom(tj, k)) * np.conj(a))


def is_coherent(state: PureState, tol: float = 1e-10) -> bool:
    return coherence_defect(state) < tol


def husimi_maximum(state: PureState) -> tuple[SpherePoint, float]:
    """Location and value of the maximum of the Husimi function.

    A coarse scan over the sphere is refined by Nelder-Mead in the tangent
    plane of the best few nodes.
    """
    from scipy.optimize import minimize

    tj = state.twice_j
    if tj == 0:
        return SpherePoint(0j), 1.0
    n = max(16, 4 * tj)
    th = np.linspace(0.0, math.pi, n + 1)
    ph = np.linspace(0.0, 2 * math.pi, 2 * n, endpoint=False)
    T, P = np.meshgrid(th, ph, indexing="ij")
    h = husimi_polar(state.coeffs, tj, T.ravel(), P.ravel())
    best_val, best_pt = -1.0, None
    for i in np.argsort(h)[::-1][:4]:
        c = SpherePoint.from_angles(T.ravel()[i], P.ravel()[i]).unit_vector()
        e1 = np.cross(c, [1.0, 0.0, 0.0] if abs(c[0]) < 0.9 else [0.0, 1.0, 0.0])
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(c, e1)

        def chart(x, c=c, e1=e1, e2=e2):
            return SpherePoint.from_vector(c + x[0] * e1 + x[1] * e2)

        res = minimize(lambda x: -husimi_eval(state, chart(x)), [0.0, 0.0],
                       method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-17, "maxiter": 4000})
        if -res.fun > best_val:
            best_val, best_pt = -res.fun, chart(res.x)
    return best_pt, float(min(best_val, 1.0))


def coherence_defect(state: PureState) -> float:
    """``1 - max Husimi``; zero exactly for coherent states."""
    if state.twice_j == 0:
        return 0.0
    _, hmax = husimi_maximum(state)
    return max(0.0, 1.0 - hmax)


def zero_centres(state: PureState, radius: float = 0.1) -> np.ndarray:
    """Unit vectors of the zeros, with nearby roots merged into their mean.

    A zero of multiplicity ``m`` comes out of the root finder as ``m``
    points scattered by about ``eps**(1/m)``; single-linkage clustering at
    chordal distance ``radius`` collects them again.
    """
    from scipy.cluster.hierarchy import fcluster, linkage

    vecs = roots_from_state(state).unit_vectors()
    if vecs.shape[0] <= 1:
        return vecs
    labels = fcluster(linkage(vecs, "single"), t=radius, criterion="distance")
    out = []
    for lab in np.unique(labels):
        c = vecs[labels == lab].sum(axis=0)
        out.append(c / np.linalg.norm(c))
    return np.array(out)


def singular_nodes(state: PureState) -> list[tuple[float, float]]:
    """``(theta, phi)`` of the points where functions of the Husimi function may kink.

    These are the zeros and, for a state with a single zero cluster
    (a coherent state), the opposite point where the Husimi function
    reaches 1.
    """
    centres = zero_centres(state)
    if centres.shape[0] == 1:
        centres = np.vstack([centres, -centres])
    out = []
    for v in centres:
        p = SpherePoint.from_vector(v)
        out.append((p.theta, p.phi))
    return out
