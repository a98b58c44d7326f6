"""Periodic points of z -> z^n as residues, their counts, and Newton continuation.

A bounded nonzero periodic point of z^n with period m is a root of unity
``exp(2*pi*i*k/M)`` with ``M = n**m - 1``; the dynamics acts on the residue as
``k -> n*k mod M``.  Residues are the canonical identity of a point, complex
values are produced on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import _numeric
from .errors import DerivativeSingular, NoConvergence, Overflow, WrongLength
from .ratmap import (
    INFINITY,
    ParamVector,
    RationalMap,
    derivative,
    evaluate,
    family_map,
    mobius_conjugate,
)

EXACT_LIMIT = 2 ** 63
INVERSION = ((0, 1), (1, 0))


def ambient_modulus(n: int, m: int) -> int:
    """n**m - 1, refusing values outside the signed 64-bit range."""
    if n < 2 or m < 1:
        raise ValueError("need n >= 2 and m >= 1")
    modulus = n ** m - 1
    if modulus >= EXACT_LIMIT:
        raise Overflow(f"{n}^{m} - 1 exceeds 2^63")
    return modulus


@dataclass(frozen=True, order=True)
class RootPoint:
    """The root of unity exp(2*pi*i*residue/modulus)."""

    modulus: int
    residue: int

    def __post_init__(self):
        if self.modulus < 1 or not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} out of range mod {self.modulus}")

    def value(self):
        return _numeric.unit_root(self.residue, self.modulus)

    def power(self, e: int):
        """z**e, with the exponent reduced modulo the residue modulus."""
        return _numeric.unit_root(self.residue * e, self.modulus)

    def image(self, n: int) -> "RootPoint":
        return RootPoint(self.modulus, self.residue * n % self.modulus)

    def period(self, n: int) -> int:
        k, steps = self.residue * n % self.modulus, 1
        while k != self.residue:
            k = k * n % self.modulus
            steps += 1
        return steps


@dataclass(frozen=True)
class PeriodVector:
    """Periods indexed like the parameters: 0..n-2, n+1..2n-1."""

    n: int
    m: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if len(self.m) != 2 * self.n - 2:
            raise WrongLength(f"need {2 * self.n - 2} periods for n={self.n}, got {len(self.m)}")
        if any(x < 1 for x in self.m):
            raise ValueError("periods must be positive")


def point_period(p, n: int) -> int:
    return 1 if p is INFINITY else p.period(n)


# -- counting ----------------------------------------------------------------

def divisors(m: int) -> list[int]:
    small = [d for d in range(1, int(m ** 0.5) + 1) if m % d == 0]
    return sorted(set(small + [m // d for d in small]))


def prime_factors(m: int) -> list[int]:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def mobius_mu(m: int) -> int:
    if m < 1:
        raise ValueError("mobius_mu needs m >= 1")
    sign, p = 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1
    if m > 1:
        sign = -sign
    return sign


def count_periodic(n: int, m: int) -> int:
    """Number of bounded points of z^n with minimal period m (0 included)."""
    ambient_modulus(n, m)
    return sum(mobius_mu(m // r) * n ** r for r in divisors(m))


def count_nonzero(n: int, m: int) -> int:
    """As :func:`count_periodic` without the fixed point 0."""
    return count_periodic(n, m) - (1 if m == 1 else 0)


# -- enumeration ---------------------------------------------------------------

@lru_cache(maxsize=64)
def _residues(n: int, m: int) -> tuple:
    modulus = ambient_modulus(n, m)
    # residues whose period divides d are exactly the multiples of M/(n^d - 1)
    steps = [modulus // (n ** (m // p) - 1) for p in prime_factors(m)]
    return tuple(k for k in range(modulus) if all(k % s for s in steps))


def enumerate_periodic(n: int, m: int) -> list[RootPoint]:
    """All bounded nonzero points of minimal period m, ascending by residue."""
    modulus = ambient_modulus(n, m)
    return [RootPoint(modulus, k) for k in _residues(n, m)]


def orbit_of(p: RootPoint, n: int) -> list[RootPoint]:
    if p is INFINITY:
        raise ValueError("orbit_of needs a finite point")
    seen = [p.residue]
    k = p.residue * n % p.modulus
    while k != p.residue:
        seen.append(k)
        k = k * n % p.modulus
    return [RootPoint(p.modulus, r) for r in sorted(seen)]


def orbit_key(p, n: int):
    """Hashable identity of the cycle containing p: (modulus, smallest residue)."""
    if p is INFINITY:
        return INFINITY
    return (p.modulus, orbit_of(p, n)[0].residue)


def orbit_representatives(n: int, m: int) -> list[RootPoint]:
    """Smallest residue of each period-m cycle, ascending."""
    reps, seen = [], set()
    for p in enumerate_periodic(n, m):
        if p.residue in seen:
            continue
        cycle = orbit_of(p, n)
        seen.update(q.residue for q in cycle)
        reps.append(cycle[0])
    return reps


# -- Newton continuation -------------------------------------------------------

def _iterate_with_derivative(f: RationalMap, z, m: int):
    d = _numeric.scalar(1)
    for _ in range(m):
        d = d * derivative(f, z)
        z = evaluate(f, z)
        if z is INFINITY:
            raise NoConvergence("orbit hit a pole")
    return z, d


def newton_periodic(f: RationalMap, z0, m: int, tol: float = 1e-12, max_iter: int = 50):
    """Newton on f^m(z) - z from z0; points near infinity are handled in 1/z."""
    if z0 is INFINITY or abs(z0) > 1:
        g = mobius_conjugate(f, INVERSION)
        w0 = 0j if z0 is INFINITY else 1 / z0
        w = newton_periodic(g, _numeric.scalar(w0), m, tol, max_iter)
        return INFINITY if w == 0 else 1 / w
    z = _numeric.scalar(z0)
    for _ in range(max_iter + 1):
        w, d = _iterate_with_derivative(f, z, m)
        residual = w - z
        if abs(residual) <= tol:
            return z
        slope = d - 1
        if abs(slope) < 1e-14:
            raise DerivativeSingular(f"|(f^m)'(z) - 1| = {float(abs(slope)):.3g}")
        z = z - residual / slope
    raise NoConvergence(f"no convergence after {max_iter} Newton steps (residual {float(abs(residual)):.3g})")


def newton_continue(a: ParamVector, z0, m: int, tol: float = 1e-12, max_iter: int = 50):
    """Follow a period-m point z0 of z^n to the nearby map of the family at a."""
    if isinstance(z0, RootPoint):
        z0 = z0.value()
    return newton_periodic(family_map(a), z0, m, tol, max_iter)
