"""Inductive construction of nondegenerate multiplier Jacobians at z^n.

Slots are filled in parameter order 0..n-2, n+1..2n-1.  At each slot the
candidate cycles of the required period are scored by the determinant of the
leading minor they complete; the search keeps only candidates above the
Hadamard threshold and backtracks when a slot has none left.  A returned
certificate is always re-verified against the finite-difference oracle.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from typing import Optional

from .derivatives import DEFAULT_H, poly_P
from .errors import ConditionsNotMet, Exhausted, VerificationFailed, WrongLength
from .jacobian import (
    PeriodicVector,
    build_jacobian,
    det,
    hadamard_threshold,
    jacobian_row,
    leading_minor,
    numeric_jacobian,
    relative_error,
)
from .periodic import (
    PeriodVector,
    RootPoint,
    ambient_modulus,
    count_nonzero,
    orbit_key,
    orbit_representatives,
)
from .ratmap import INFINITY, param_indices
from .report import complex_json, dumps, json_complex

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-4
DEFAULT_MAX_BACKTRACK = 100_000


@dataclass(frozen=True)
class ConditionReport:
    cond_i: bool
    cond_ii: bool
    ones_count: int
    twos_count: int
    max_period: int

    @property
    def ok(self):
        return self.cond_i and self.cond_ii


@dataclass(frozen=True)
class Verification:
    max_rel_err: float
    min_abs_leading_det: float
    thresholds: tuple


@dataclass(frozen=True)
class Certificate:
    n: int
    periods_input: tuple
    permutation: tuple
    points: tuple
    det_value: complex
    leading_minor_dets: tuple
    verification: Optional[Verification] = None

    @property
    def slot_periods(self):
        return tuple(self.periods_input[i] for i in self.permutation)

    def periodic_vector(self) -> PeriodicVector:
        return PeriodicVector(self.n, self.points, PeriodVector(self.n, self.slot_periods))


def _as_periods(n, m) -> tuple:
    if isinstance(m, PeriodVector):
        if m.n != n:
            raise WrongLength("period vector is for a different degree")
        return m.m
    return PeriodVector(n, tuple(m)).m


def check_period_conditions(n: int, m) -> ConditionReport:
    periods = _as_periods(n, m)
    ones = periods.count(1)
    twos = periods.count(2)
    top = max(periods)
    return ConditionReport(
        cond_i=ones <= n,
        cond_ii=top > 2 and twos == 0,
        ones_count=ones,
        twos_count=twos,
        max_period=top,
    )


def _arrange(n, periods) -> tuple:
    """Slot -> input index; see :func:`order_periods` for the rules."""
    order = sorted(range(len(periods)), key=lambda i: (periods[i], i))
    if periods.count(1) == n:
        last = max(i for i in order if periods[i] == 1)
        order.remove(last)
        prev = order.pop()
    else:
        last = order.pop()
        prev = order.pop()
        if periods[last] > periods[prev]:
            prev, last = last, prev
    return tuple(order + [prev, last])


def order_periods(n: int, m) -> tuple:
    """Permutation (slot -> input index) putting a largest period in slot 2n-2.

    With exactly n ones, slot 2n-1 gets a 1 (it will hold infinity); otherwise
    it gets the largest remaining period.  All other slots are nondecreasing,
    and ties keep the input order.
    """
    report = check_period_conditions(n, m)
    if not report.ok:
        raise ConditionsNotMet(_conditions_message(report, n))
    return _arrange(n, _as_periods(n, m))


def _conditions_message(report, n):
    bad = []
    if not report.cond_i:
        bad.append(f"(i) {report.ones_count} periods equal 1 (max {n})")
    if not report.cond_ii:
        if report.max_period <= 2:
            bad.append("(ii) no period exceeds 2")
        else:
            bad.append(f"(ii) {report.twos_count} periods equal 2")
    return "; ".join(bad)


# -- search -------------------------------------------------------------------------

def cofactor_polynomial(n: int, rows: list, slot: int, m: int) -> dict:
    """Coefficients of P with det(J(slot)) = z^(-n^(m-1)) P(z) as the slot point varies.

    ``rows`` are the full Jacobian rows of the slots before ``slot``.
    """
    cols = param_indices(n)
    k = slot + 1
    upper = [row[:k] for row in rows[:slot]]
    coeffs = {}
    for i in range(k):
        sub = [r[:i] + r[i + 1:] for r in upper]
        cof = det(sub) if sub else 1
        if (slot + i) % 2:
            cof = -cof
        for e, c in poly_P(n, cols[i], m).terms.items():
            coeffs[e] = coeffs.get(e, 0) + cof * c
    return coeffs


def polynomial_degree(coeffs: dict, rtol: float = 1e-9) -> int:
    scale = max((abs(c) for c in coeffs.values()), default=0)
    live = [e for e, c in coeffs.items() if abs(c) > rtol * scale]
    if not live:
        raise ValueError("cofactor polynomial vanishes identically")
    return max(live)


def _candidates(n, slot, m):
    if slot == 2 * n - 3 and m == 1:
        return [INFINITY]
    return orbit_representatives(n, m)


def _search(n, slot_periods, max_nodes, check_degree):
    k = 2 * n - 2
    cols = param_indices(n)
    row_cache = {}
    state = {"nodes": 0, "deepest": -1, "dets": []}

    def row_of(p, m):
        if p not in row_cache:
            row_cache[p] = jacobian_row(n, p, m)
        return row_cache[p]

    def descend(slot, chosen, rows, used):
        if slot == k:
            return chosen
        m = slot_periods[slot]
        scored = []
        for p in _candidates(n, slot, m):
            key = orbit_key(p, n)
            if key in used:
                continue
            state["nodes"] += 1
            if state["nodes"] > max_nodes:
                raise Exhausted(
                    f"node budget {max_nodes} exceeded",
                    slot=state["deepest"], candidate_dets=state["dets"], nodes=state["nodes"],
                )
            row = row_of(p, m)
            minor = [r[:slot + 1] for r in rows] + [row[:slot + 1]]
            d = det(minor)
            scored.append((abs(d), hadamard_threshold(minor), p, key, row))
        if slot >= state["deepest"]:
            state["deepest"] = slot
            state["dets"] = [float(s[0]) for s in scored]
        admissible = [s for s in scored if s[0] > s[1]]
        # 9 significant digits: near-ties fall through to the residue order
        admissible.sort(key=lambda s: (-float(f"{float(s[0]):.9g}"),
                                       -1 if s[2] is INFINITY else s[2].residue))
        for _, _, p, key, row in admissible:
            if check_degree and p is not INFINITY:
                deg = polynomial_degree(cofactor_polynomial(n, rows + [row], slot, m))
                bound = count_nonzero(n, m)
                if deg >= bound:
                    raise VerificationFailed(
                        "degree-bound", f"slot {cols[slot]}: degree {deg} >= {bound} points")
            found = descend(slot + 1, chosen + [p], rows + [row], used | {key})
            if found is not None:
                return found
            log.debug("backtracking from slot %d", slot)
        return None

    result = descend(0, [], [], frozenset())
    if result is None:
        raise Exhausted(
            f"no admissible assignment; deepest slot reached: j={cols[state['deepest']]}",
            slot=state["deepest"], candidate_dets=state["dets"], nodes=state["nodes"],
        )
    return result


def _assemble(n, periods, perm, points):
    slot_periods = tuple(periods[i] for i in perm)
    v = PeriodicVector(n, tuple(points), PeriodVector(n, slot_periods))
    J = build_jacobian(v)
    dets = tuple(complex(det(leading_minor(J, j))) for j in J.cols)
    return Certificate(n, tuple(periods), tuple(perm), tuple(points), dets[-1], dets)


def construct_certificate(n: int, m, tol: float = DEFAULT_TOL, h: float = DEFAULT_H,
                          max_backtrack: int = DEFAULT_MAX_BACKTRACK,
                          verify: bool = True) -> Certificate:
    """Find a periodic vector of z^n with the given periods and all leading minors nondegenerate."""
    if n < 3:
        raise ConditionsNotMet("certificates are built for n >= 3 only")
    periods = _as_periods(n, m)
    perm = order_periods(n, periods)
    for p in set(periods):
        ambient_modulus(n, p)
    slot_periods = [periods[i] for i in perm]
    points = _search(n, slot_periods, max_backtrack, check_degree=True)
    cert = _assemble(n, periods, perm, points)
    if verify:
        cert = replace(cert, verification=verify_certificate(cert, h, tol))
    return cert


def explore_beyond_conditions(n: int, m, tol: float = DEFAULT_TOL, h: float = DEFAULT_H,
                              max_backtrack: int = DEFAULT_MAX_BACKTRACK) -> Certificate:
    """Same search with condition (ii) waived; success is evidence, failure proves nothing."""
    if n < 3:
        raise ConditionsNotMet("certificates are built for n >= 3 only")
    periods = _as_periods(n, m)
    report = check_period_conditions(n, periods)
    if not report.cond_i:
        raise ConditionsNotMet(_conditions_message(report, n))
    for p in set(periods):
        ambient_modulus(n, p)
    perm = _arrange(n, periods)
    slot_periods = [periods[i] for i in perm]
    points = _search(n, slot_periods, max_backtrack, check_degree=False)
    cert = _assemble(n, periods, perm, points)
    return replace(cert, verification=verify_certificate(cert, h, tol))


# -- verification -----------------------------------------------------------------------

def _check_structure(c: Certificate):
    n = c.n
    k = 2 * n - 2
    if len(c.periods_input) != k or len(c.points) != k:
        raise VerificationFailed("structure", f"expected {k} periods and points")
    if sorted(c.permutation) != list(range(k)):
        raise VerificationFailed("structure", "permutation is not a permutation")
    if len(c.leading_minor_dets) != k:
        raise VerificationFailed("structure", f"expected {k} leading minor determinants")
    seen = {}
    for slot, (p, m) in enumerate(zip(c.points, c.slot_periods)):
        if p is INFINITY:
            if m != 1 or slot != k - 1:
                raise VerificationFailed("periods", f"infinity in slot {slot} with period {m}")
        else:
            if p.modulus != n ** m - 1 or p.period(n) != m:
                raise VerificationFailed("periods", f"slot {slot}: point does not have minimal period {m}")
        key = orbit_key(p, n)
        if key in seen:
            raise VerificationFailed("distinctness", f"slots {seen[key]} and {slot} share a cycle")
        seen[key] = slot


def verify_certificate(c: Certificate, h: float = DEFAULT_H, tol: float = DEFAULT_TOL) -> Verification:
    """Recompute everything from the points; raise VerificationFailed on the first violation."""
    _check_structure(c)
    v = c.periodic_vector()
    J = build_jacobian(v)
    thresholds, dets = [], []
    for j in J.cols:
        minor = leading_minor(J, j)
        thresholds.append(hadamard_threshold(minor))
        dets.append(det(minor))
    for j, d, t, recorded in zip(J.cols, dets, thresholds, c.leading_minor_dets):
        if not abs(d) > t:
            raise VerificationFailed("nondegeneracy", f"|det J({j})| = {float(abs(d)):.3g} <= {t:.3g}")
        if not abs(recorded) > t:
            raise VerificationFailed("nondegeneracy", f"recorded det J({j}) is below threshold {t:.3g}")
        if abs(recorded - d) > 1e-8 * abs(d):
            raise VerificationFailed("consistency", f"recorded det J({j}) differs from recomputed")
    if not abs(c.det_value) > thresholds[-1]:
        raise VerificationFailed("nondegeneracy", "recorded Jacobian determinant is below threshold")
    if abs(c.det_value - dets[-1]) > 1e-8 * abs(dets[-1]):
        raise VerificationFailed("consistency", "recorded Jacobian determinant differs from recomputed")
    N = numeric_jacobian(v, h)
    worst = 0.0
    for r, (crow, nrow) in enumerate(zip(J.entries, N.entries)):
        for j, a, b in zip(J.cols, crow, nrow):
            err = relative_error(a, b)
            if err > tol:
                raise VerificationFailed("oracle", f"row {r}, a_{j}: relative error {err:.3g} > {tol:g}")
            worst = max(worst, err)
    return Verification(worst, min(float(abs(d)) for d in dets), tuple(thresholds))


# -- persistence ---------------------------------------------------------------------------

def _point_json(p):
    return "infinity" if p is INFINITY else {"modulus": p.modulus, "residue": p.residue}


def _json_point(obj):
    if obj == "infinity":
        return INFINITY
    return RootPoint(int(obj["modulus"]), int(obj["residue"]))


def certificate_to_dict(c: Certificate) -> dict:
    out = {
        "n": c.n,
        "periods_input": list(c.periods_input),
        "permutation": list(c.permutation),
        "points": [_point_json(p) for p in c.points],
        "det_value": complex_json(c.det_value),
        "leading_minor_dets": [complex_json(d) for d in c.leading_minor_dets],
    }
    if c.verification is not None:
        out["verification"] = {
            "max_rel_err": float(c.verification.max_rel_err),
            "min_abs_leading_det": float(c.verification.min_abs_leading_det),
            "thresholds": [float(t) for t in c.verification.thresholds],
        }
    return out


def certificate_from_dict(obj: dict) -> Certificate:
    """Inverse of :func:`certificate_to_dict`; malformed input raises ValueError."""
    try:
        return _from_dict(obj)
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed certificate: {type(exc).__name__} {exc}") from None


def _from_dict(obj: dict) -> Certificate:
    ver = obj.get("verification")
    if ver is not None:
        ver = Verification(float(ver["max_rel_err"]), float(ver["min_abs_leading_det"]),
                           tuple(float(t) for t in ver["thresholds"]))
    return Certificate(
        n=int(obj["n"]),
        periods_input=tuple(int(x) for x in obj["periods_input"]),
        permutation=tuple(int(x) for x in obj["permutation"]),
        points=tuple(_json_point(p) for p in obj["points"]),
        det_value=json_complex(obj["det_value"]),
        leading_minor_dets=tuple(json_complex(d) for d in obj["leading_minor_dets"]),
        verification=ver,
    )


def certificate_to_json(c: Certificate) -> str:
    return dumps(certificate_to_dict(c))


def certificate_from_json(text: str) -> Certificate:
    return certificate_from_dict(json.loads(text))
