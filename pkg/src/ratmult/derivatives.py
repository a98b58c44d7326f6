"""Multiplier derivatives of z^n along the family, at the origin.

Closed form: for a finite nonzero point z0 of period m,

    d lambda / d a_j = (j n^(m-1) - n^m) * sum_{i<m} z0^(n^i (j - n)),

and for the fixed point at infinity the derivative is -1 for j = 2n-1 and 0
otherwise.  ``poly_P`` rewrites the closed form as z0^(-n^(m-1)) P(z0) with an
honest polynomial P.  ``dlambda_numeric`` is the independent check: central
differences of multipliers of Newton-continued points of the actual family.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _numeric
from .errors import IndexExcluded, InfinityPoint, Overflow
from .periodic import EXACT_LIMIT, RootPoint, newton_continue
from .ratmap import INFINITY, ParamVector, evaluate, family_map, multiplier, param_indices

DEFAULT_H = 1e-6
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50


def check_index(n: int, j: int):
    if j not in param_indices(n):
        raise IndexExcluded(f"j={j} is not a parameter index for n={n}")


def prefactor(n: int, j: int, m: int) -> int:
    c = j * n ** (m - 1) - n ** m
    # j != n, so j n^(m-1) != n^m
    assert c != 0, (n, j, m)
    return c


@dataclass(frozen=True)
class SparsePolynomial:
    """Integer polynomial as {exponent: coefficient}, zero terms never stored."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(e): c for e, c in self.terms.items() if c != 0}
        if any(e < 0 for e in clean):
            raise ValueError("negative exponent")
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def from_terms(cls, pairs):
        """Build from (exponent, coefficient) pairs, summing repeated exponents."""
        acc = {}
        for e, c in pairs:
            acc[e] = acc.get(e, 0) + c
        return cls(acc)

    @property
    def degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(self.terms)

    @property
    def support(self) -> frozenset:
        return frozenset(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __call__(self, z):
        return sum((c * z ** e for e, c in self.terms.items()), 0 * z)


@dataclass(frozen=True)
class DerivTableEntry:
    j: int
    m: int
    value: complex


def dlambda_closed(n: int, m: int, j: int, z0: RootPoint):
    """Closed-form d(lambda_{z0})/d(a_j) at a = 0 for a finite nonzero z0."""
    check_index(n, j)
    if z0 is INFINITY:
        raise InfinityPoint("use dlambda_infinity for the point at infinity")
    if z0.period(n) != m:
        raise ValueError(f"{z0} does not have minimal period {m} under z^{n}")
    total = _numeric.scalar(0)
    for i in range(m):
        total = total + z0.power(n ** i * (j - n))
    return prefactor(n, j, m) * total


def dlambda_infinity(n: int, j: int) -> int:
    check_index(n, j)
    return -1 if j == 2 * n - 1 else 0


def poly_P(n: int, j: int, m: int) -> SparsePolynomial:
    """P_{n,j,m}: the closed form times z0^(n^(m-1)), as an integer polynomial."""
    check_index(n, j)
    c = prefactor(n, j, m)
    top = n ** (m - 1)
    if j <= n - 2:
        exps = [(j + 1) * top - 1] + [n ** i * (j - n) + top for i in range(m - 1)]
    elif j <= 2 * n - 2:
        exps = [n ** i * (j - n) + top for i in range(m)]
    else:
        # the i = m-1 term z^(n^m) is folded to z using z0^(n^m) = z0
        exps = [1] + [n ** i * (n - 1) + top for i in range(m - 1)]
    if max(exps) >= EXACT_LIMIT:
        raise Overflow(f"exponent of P_{{{n},{j},{m}}} exceeds 2^63")
    return SparsePolynomial.from_terms((e, c) for e in exps)


def deg_P(n: int, j: int, m: int) -> int:
    check_index(n, j)
    if j <= n - 2:
        return (j + 1) * n ** (m - 1) - 1
    if j <= 2 * n - 2:
        return (j - n + 1) * n ** (m - 1)
    if m == 1:
        return 1
    return 2 * n ** (m - 1) - n ** (m - 2)


def eval_P_at_root(P: SparsePolynomial, z0: RootPoint):
    """Evaluate P at a root of unity, reducing each exponent mod the residue modulus."""
    if z0 is INFINITY:
        raise InfinityPoint("P is evaluated at finite roots only")
    total = _numeric.scalar(0)
    for e, c in P.terms.items():
        total = total + c * z0.power(e)
    return total


def support_disjoint(P1: SparsePolynomial, P2: SparsePolynomial) -> bool:
    return P1.support.isdisjoint(P2.support)


# -- numeric oracle ---------------------------------------------------------------

def continued_multiplier(a: ParamVector, z0, m: int,
                         tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER):
    """Multiplier at parameter a of the cycle continued from z0 (a point of z^n)."""
    f = family_map(a)
    if z0 is INFINITY:
        if m != 1:
            raise ValueError("infinity is a fixed point; m must be 1")
        return multiplier(f, [INFINITY])
    z = newton_continue(a, z0, m, tol, max_iter)
    orbit = [z]
    for _ in range(m - 1):
        orbit.append(evaluate(f, orbit[-1]))
    return multiplier(f, orbit)


def dlambda_numeric(n: int, m: int, j: int, z0, h: float = DEFAULT_H,
                    tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER):
    """Central difference of the continued multiplier in direction a_j."""
    check_index(n, j)
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    h = _numeric.scalar(h).real
    plus = continued_multiplier(ParamVector.basis(n, j, h), z0, m, tol, max_iter)
    minus = continued_multiplier(ParamVector.basis(n, j, -h), z0, m, tol, max_iter)
    return (plus - minus) / (2 * h)
