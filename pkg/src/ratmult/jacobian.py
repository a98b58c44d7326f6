"""Multiplier Jacobian of a periodic vector of z^n at a = 0, and its leading minors."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .derivatives import DEFAULT_H, dlambda_closed, dlambda_infinity, dlambda_numeric
from .errors import IndexOutOfRange, WrongLength
from .linalg import det
from .periodic import PeriodVector, RootPoint, ambient_modulus, orbit_key, point_period
from .ratmap import INFINITY, param_indices

__all__ = [
    "PeriodicVector",
    "MultiplierJacobian",
    "jacobian_row",
    "build_jacobian",
    "numeric_jacobian",
    "leading_minor",
    "leading_minor_dets",
    "det",
    "hadamard_threshold",
    "relative_error",
]

THRESHOLD_SCALE = 1e-10


@dataclass(frozen=True)
class PeriodicVector:
    """2n-2 periodic points of z^n in distinct cycles, with their periods."""

    n: int
    points: tuple
    periods: PeriodVector

    def __post_init__(self):
        n = self.n
        object.__setattr__(self, "points", tuple(self.points))
        if self.periods.n != n:
            raise ValueError("period vector is for a different degree")
        if len(self.points) != 2 * n - 2:
            raise WrongLength(f"need {2 * n - 2} points, got {len(self.points)}")
        seen = set()
        for slot, (p, m) in enumerate(zip(self.points, self.periods.m)):
            if p is INFINITY:
                if m != 1:
                    raise ValueError(f"slot {slot}: infinity is a fixed point, labelled period {m}")
            else:
                if not isinstance(p, RootPoint):
                    raise TypeError(f"slot {slot}: expected RootPoint or INFINITY")
                if p.modulus != ambient_modulus(n, m):
                    raise ValueError(f"slot {slot}: modulus {p.modulus} != {n}^{m} - 1")
                if p.period(n) != m:
                    raise ValueError(f"slot {slot}: minimal period {p.period(n)} != {m}")
            key = orbit_key(p, n)
            if key in seen:
                raise ValueError(f"slot {slot}: cycle already used by an earlier slot")
            seen.add(key)


@dataclass(frozen=True)
class MultiplierJacobian:
    n: int
    rows: tuple
    cols: tuple
    entries: tuple

    def matrix(self):
        return [list(r) for r in self.entries]

    def entry(self, r, j):
        return self.entries[r][self.cols.index(j)]


def jacobian_row(n: int, point, m: int) -> list:
    """Closed-form derivatives of one multiplier against every parameter."""
    if point is INFINITY:
        return [dlambda_infinity(n, j) for j in param_indices(n)]
    return [dlambda_closed(n, m, j, point) for j in param_indices(n)]


def build_jacobian(v: PeriodicVector) -> MultiplierJacobian:
    rows = tuple(tuple(jacobian_row(v.n, p, m)) for p, m in zip(v.points, v.periods.m))
    return MultiplierJacobian(v.n, v.points, tuple(param_indices(v.n)), rows)


def numeric_jacobian(v: PeriodicVector, h: float = DEFAULT_H) -> MultiplierJacobian:
    """Every entry from the finite-difference oracle."""
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    cols = param_indices(v.n)
    rows = tuple(
        tuple(dlambda_numeric(v.n, m, j, p, h) for j in cols)
        for p, m in zip(v.points, v.periods.m)
    )
    return MultiplierJacobian(v.n, v.points, tuple(cols), rows)


def _minor_size(n: int, j: int) -> int:
    if j == n:
        j = n - 2
    cols = param_indices(n)
    if j not in cols:
        raise IndexOutOfRange(f"no leading minor for j={j} (n={n})")
    return cols.index(j) + 1


def leading_minor(J: MultiplierJacobian, j: int):
    """Top-left block through the diagonal entry of column j (j = n aliases n-2)."""
    k = _minor_size(J.n, j)
    return [list(row[:k]) for row in J.entries[:k]]


def leading_minor_dets(J: MultiplierJacobian) -> list:
    return [det(leading_minor(J, j)) for j in J.cols]


def hadamard_threshold(M) -> float:
    """1e-10 times the product of max(1, row 2-norm)."""
    scale = 1.0
    for row in M:
        scale *= max(1.0, math.sqrt(sum(float(abs(x)) ** 2 for x in row)))
    return THRESHOLD_SCALE * scale


def relative_error(reference, value) -> float:
    return float(abs(reference - value)) / max(1.0, float(abs(reference)))
