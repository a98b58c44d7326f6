"""Degree-n rational maps of the Riemann sphere.

A map is stored as a pair of coefficient tuples (ascending powers) of formal
degree n.  Points are complex numbers or :data:`INFINITY`.  All evaluation is
chart-aware: a point with ``|z| > 1`` (or infinity) is handled in the chart
``w = 1/z``, so poles and infinity are regular points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from . import _numeric
from .errors import (
    DegenerateFixedPoints,
    MultiplierOne,
    NotACycle,
    ResultantZero,
    SingularMobius,
)
from .linalg import det


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

RESULTANT_RTOL = 1e-13
CYCLE_TOL = 1e-9


def is_infinity(z) -> bool:
    return z is INFINITY


# -- small polynomial helpers (ascending coefficients) ----------------------

def polyval(coeffs, x):
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def polyder(coeffs):
    return tuple(k * c for k, c in enumerate(coeffs))[1:] or (0,)


def polymul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def polypow(p, k):
    out = [1]
    for _ in range(k):
        out = polymul(out, p)
    return out


def _norm(coeffs):
    return math.sqrt(sum(abs(c) ** 2 for c in coeffs))


# -- parameter vectors -------------------------------------------------------

def param_indices(n: int) -> list[int]:
    """Parameter indices of the family: 0..n-2 then n+1..2n-1."""
    return list(range(0, n - 1)) + list(range(n + 1, 2 * n))


@dataclass(frozen=True)
class ParamVector:
    """2n-2 complex parameters, stored in :func:`param_indices` order."""

    n: int
    values: tuple

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("degree must be at least 2")
        if len(self.values) != 2 * self.n - 2:
            raise ValueError(f"expected {2 * self.n - 2} parameters, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(_numeric.scalar(v) for v in self.values))

    @classmethod
    def zeros(cls, n):
        return cls(n, (0,) * (2 * n - 2))

    @classmethod
    def basis(cls, n, j, value=1.0):
        """Parameter vector with ``a_j = value`` and all other entries zero."""
        idx = param_indices(n)
        if j not in idx:
            from .errors import IndexExcluded
            raise IndexExcluded(f"index {j} is not a parameter for n={n}")
        return cls(n, tuple(value if i == j else 0 for i in idx))

    @classmethod
    def from_mapping(cls, n, mapping):
        idx = param_indices(n)
        extra = set(mapping) - set(idx)
        if extra:
            from .errors import IndexExcluded
            raise IndexExcluded(f"indices {sorted(extra)} are not parameters for n={n}")
        return cls(n, tuple(mapping.get(i, 0) for i in idx))

    def __getitem__(self, j):
        return self.values[param_indices(self.n).index(j)]

    def as_dict(self):
        return dict(zip(param_indices(self.n), self.values))

    def norm(self):
        return _norm(self.values)


# -- the map itself ----------------------------------------------------------

@dataclass(frozen=True)
class RationalMap:
    """``p(z)/q(z)`` with ``num``/``den`` the n+1 ascending coefficients."""

    n: int
    num: tuple
    den: tuple

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ValueError("degree must be positive")
        if len(self.num) != n + 1 or len(self.den) != n + 1:
            raise ValueError(f"need {n + 1} coefficients for numerator and denominator")
        num = tuple(_numeric.scalar(c) for c in self.num)
        den = tuple(_numeric.scalar(c) for c in self.den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        if num[n] == 0 and den[n] == 0:
            raise ResultantZero("both leading coefficients vanish")
        # rank test on the Sylvester matrix; |det| alone is too scale-sensitive
        sv = np.linalg.svd(np.array(sylvester(num, den), dtype=complex), compute_uv=False)
        if sv[-1] <= RESULTANT_RTOL * sv[0]:
            raise ResultantZero(f"Sylvester matrix is numerically singular (cond {sv[0] / max(sv[-1], 1e-300):.3g})")

    @property
    def rnum(self):
        return self.num[::-1]

    @property
    def rden(self):
        return self.den[::-1]

    def __call__(self, z):
        return evaluate(self, z)


def sylvester(num: Sequence, den: Sequence):
    """2n x 2n Sylvester matrix of two coefficient lists of formal degree n."""
    if len(num) != len(den):
        raise ValueError("coefficient lists must have equal length")
    n = len(num) - 1
    size = 2 * n
    p_desc = list(num)[::-1]
    q_desc = list(den)[::-1]
    rows = []
    for coeffs in (p_desc, q_desc):
        for shift in range(n):
            row = [0] * size
            row[shift:shift + n + 1] = coeffs
            rows.append(row)
    return rows


def resultant(num: Sequence, den: Sequence):
    """Sylvester resultant of two coefficient lists of equal formal degree."""
    if len(num) == 1:
        return 1
    return det(sylvester(num, den))


def family_map(a: ParamVector) -> RationalMap:
    """``(z^n + a_{n-2} z^{n-2} + ... + a_0) / (1 - a_{n+1} z - ... - a_{2n-1} z^{n-1})``."""
    n = a.n
    params = a.as_dict()
    num = [params.get(k, 0) for k in range(n - 1)] + [0, 1]
    den = [1] + [-params[n + k] for k in range(1, n)] + [0]
    return RationalMap(n, tuple(num), tuple(den))


def monomial_family(n: int, j: int, a) -> RationalMap:
    """The polynomial ``z^n + a z^j``; only ``0 <= j <= n`` fits degree n."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    if j > n:
        raise ValueError(f"z^{n} + a z^{j} has degree {j} > {n}; use family_map for j > n")
    num = [0] * (n + 1)
    num[n] = 1
    num[j] = num[j] + a
    den = [1] + [0] * n
    return RationalMap(n, tuple(num), tuple(den))


# -- charts ------------------------------------------------------------------

def _chart(z):
    """(chart index, local coordinate): chart 0 is z, chart 1 is 1/z."""
    if z is INFINITY:
        return 1, 0j
    if abs(z) <= 1:
        return 0, z
    return 1, 1 / z


def _local_pair(f: RationalMap, cin, cout):
    """Coefficients (P, Q) with cout ∘ f ∘ cin^{-1} = P/Q."""
    if cin == 0:
        p, q = f.num, f.den
    else:
        p, q = f.rnum, f.rden
    return (p, q) if cout == 0 else (q, p)


def evaluate(f: RationalMap, z):
    """f(z) on the sphere."""
    cin, u = _chart(z)
    p, q = _local_pair(f, cin, 0)
    top, bottom = polyval(p, u), polyval(q, u)
    if bottom == 0:
        return INFINITY
    return top / bottom


def iterate(f: RationalMap, z, m: int):
    if m < 1:
        raise ValueError("m must be positive")
    for _ in range(m):
        z = evaluate(f, z)
    return z


def chordal_distance(z, w) -> float:
    if z is INFINITY and w is INFINITY:
        return 0.0
    if z is INFINITY:
        z, w = w, z
    if w is INFINITY:
        return 2.0 / math.sqrt(1 + float(abs(z)) ** 2)
    az, aw = float(abs(z)), float(abs(w))
    return 2 * float(abs(z - w)) / math.sqrt((1 + az * az) * (1 + aw * aw))


def chart_derivative(f: RationalMap, z, target=None):
    """Derivative of f at z read in the charts of z and of ``target`` (default f(z))."""
    if target is None:
        target = evaluate(f, z)
    cin, u = _chart(z)
    cout, _ = _chart(target)
    p, q = _local_pair(f, cin, cout)
    pv, qv = polyval(p, u), polyval(q, u)
    dp, dq = polyval(polyder(p), u), polyval(polyder(q), u)
    return (dp * qv - pv * dq) / (qv * qv)


def derivative(f: RationalMap, z):
    """Ordinary derivative f'(z) at a finite point with finite image."""
    p, q = f.num, f.den
    pv, qv = polyval(p, z), polyval(q, z)
    return (polyval(polyder(p), z) * qv - pv * polyval(polyder(q), z)) / (qv * qv)


def multiplier(f: RationalMap, orbit, tol: float = CYCLE_TOL):
    """Multiplier of the cycle ``orbit`` (each point maps to the next, cyclically)."""
    orbit = list(orbit)
    if not orbit:
        raise ValueError("empty orbit")
    lam = _numeric.scalar(1)
    for k, z in enumerate(orbit):
        nxt = orbit[(k + 1) % len(orbit)]
        image = evaluate(f, z)
        residual = chordal_distance(image, nxt)
        if residual > tol:
            raise NotACycle(f"point {k}: f(z) misses the next point by {residual:.3g}")
        lam = lam * chart_derivative(f, z, nxt)
    return lam


# -- Möbius conjugation --------------------------------------------------------

def _mobius_entries(M):
    (alpha, beta), (gamma, delta) = M
    alpha, beta, gamma, delta = (_numeric.scalar(x) for x in (alpha, beta, gamma, delta))
    d = alpha * delta - beta * gamma
    scale = max(abs(alpha), abs(beta), abs(gamma), abs(delta))
    if scale == 0 or abs(d) <= 1e-14 * scale * scale:
        raise SingularMobius("Möbius matrix is singular")
    return alpha, beta, gamma, delta


def apply_mobius(M, z):
    alpha, beta, gamma, delta = _mobius_entries(M)
    if z is INFINITY:
        return INFINITY if gamma == 0 else alpha / gamma
    bottom = gamma * z + delta
    if bottom == 0:
        return INFINITY
    return (alpha * z + beta) / bottom


def mobius_conjugate(f: RationalMap, M) -> RationalMap:
    """M ∘ f ∘ M^{-1}, by homogeneous substitution."""
    alpha, beta, gamma, delta = _mobius_entries(M)
    n = f.n
    x_sub = [-beta, delta]      # numerator of M^{-1}(z)
    y_sub = [alpha, -gamma]     # denominator of M^{-1}(z)
    x_pows = [polypow(x_sub, k) for k in range(n + 1)]
    y_pows = [polypow(y_sub, k) for k in range(n + 1)]

    def substitute(coeffs):
        out = [0] * (n + 1)
        for k, c in enumerate(coeffs):
            if c == 0:
                continue
            term = polymul(x_pows[k], y_pows[n - k])
            for i, t in enumerate(term):
                out[i] = out[i] + c * t
        return out

    p_sub, q_sub = substitute(f.num), substitute(f.den)
    num = tuple(alpha * a + beta * b for a, b in zip(p_sub, q_sub))
    den = tuple(gamma * a + delta * b for a, b in zip(p_sub, q_sub))
    return RationalMap(n, num, den)


def same_map(f: RationalMap, g: RationalMap, rtol: float = 1e-9) -> bool:
    """Projective equality: p_f q_g == p_g q_f coefficientwise."""
    if f.n != g.n:
        return False
    lhs = polymul(f.num, g.den)
    rhs = polymul(g.num, f.den)
    scale = max(_norm(lhs), _norm(rhs), 1e-300)
    return all(abs(a - b) <= rtol * scale for a, b in zip(lhs, rhs))


# -- fixed points and the index formula ---------------------------------------

def _roots(coeffs_ascending):
    desc = list(coeffs_ascending)[::-1]
    if _numeric.current_bits() is None:
        return [complex(r) for r in np.roots(np.array(desc, dtype=complex))]
    return list(mpmath.polyroots(desc, maxsteps=200, extraprec=_numeric.current_bits()))


def fixed_points(f: RationalMap):
    """All fixed points: roots of z q(z) - p(z), plus infinity when q has degree < n."""
    n = f.n
    fix = [0] * (n + 2)
    for k in range(n + 1):
        fix[k + 1] = fix[k + 1] + f.den[k]
        fix[k] = fix[k] - f.num[k]
    scale = _norm(fix)
    top = n + 1
    while top > 0 and abs(fix[top]) <= 1e-14 * scale:
        top -= 1
    coeffs = fix[:top + 1]
    roots = _roots(coeffs) if top > 0 else []
    dfix = polyder(coeffs)
    polished = []
    for z in roots:
        for _ in range(3):
            d = polyval(dfix, z)
            if d == 0:
                break
            z = z - polyval(coeffs, z) / d
        polished.append(z)
    return polished + [INFINITY] * (n + 1 - top)


def index_sum(f: RationalMap, mult_tol: float = 1e-6, sep_tol: float = 1e-7):
    """Sum of 1/(1 - λ) over all fixed points; equals 1 for simple fixed points."""
    pts = fixed_points(f)
    lams = [chart_derivative(f, z, z) for z in pts]
    for z, lam in zip(pts, lams):
        if abs(1 - lam) < mult_tol:
            raise MultiplierOne(f"fixed point {z!r} has multiplier {complex(lam):.6g}")
    for i in range(len(pts)):
        for k in range(i + 1, len(pts)):
            if chordal_distance(pts[i], pts[k]) < sep_tol:
                raise DegenerateFixedPoints("multiple fixed point")
    total = _numeric.scalar(0)
    for lam in lams:
        total = total + 1 / (1 - lam)
    return total
