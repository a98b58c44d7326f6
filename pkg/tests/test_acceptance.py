"""Exit criteria.  Each test records a PASS/FAIL line shown in the terminal summary."""

import itertools
import subprocess
import sys
import time

import numpy as np
import pytest

from ratmult.certificate import (
    check_period_conditions,
    construct_certificate,
    verify_certificate,
)
from ratmult.derivatives import (
    deg_P,
    dlambda_closed,
    dlambda_infinity,
    dlambda_numeric,
    eval_P_at_root,
    poly_P,
    support_disjoint,
)
from ratmult.errors import DynamicsError
from ratmult.jacobian import build_jacobian, hadamard_threshold, leading_minor
from ratmult.periodic import (
    count_nonzero,
    count_periodic,
    divisors,
    enumerate_periodic,
    newton_periodic,
    orbit_of,
)
from ratmult.ratmap import (
    INFINITY,
    RationalMap,
    apply_mobius,
    evaluate,
    fixed_points,
    index_sum,
    mobius_conjugate,
    multiplier,
    param_indices,
)


def test_criterion_1_counting_identities(record_criterion):
    start = time.perf_counter()
    failures = []
    for n, m in itertools.product(range(2, 6), range(1, 9)):
        if sum(count_periodic(n, r) for r in divisors(m)) != n ** m:
            failures.append(("divisor sum", n, m))
        if m >= 3 and count_nonzero(n, m) < n ** m - n ** (m - 2):
            failures.append(("lower bound", n, m))
    for n in range(2, 6):
        if count_periodic(n, 1) != n or count_periodic(n, 2) != n * n - n:
            failures.append(("small periods", n))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 1.0
    record_criterion(1, ok, f"{len(failures)} failures, {elapsed:.3f}s (< 1s)")
    assert not failures
    assert elapsed < 1.0


def test_criterion_2_enumeration(record_criterion):
    start = time.perf_counter()
    failures = []
    for n, m in itertools.product(range(2, 5), range(1, 7)):
        pts = enumerate_periodic(n, m)
        if len(pts) != count_nonzero(n, m):
            failures.append(("count", n, m))
        cycles = {tuple(orbit_of(p, n)) for p in pts}
        if any(len(c) != m for c in cycles) or sum(len(c) for c in cycles) != len(pts):
            failures.append(("partition", n, m))
    elapsed = time.perf_counter() - start
    record_criterion(2, not failures and elapsed < 5, f"{len(failures)} failures, {elapsed:.2f}s (< 5s)")
    assert not failures
    assert elapsed < 5.0


def test_criterion_3_closed_form_vs_oracle(record_criterion):
    start = time.perf_counter()
    worst, worst_inf, cases = 0.0, 0.0, 0
    for n, m in itertools.product((2, 3), range(1, 5)):
        pts = enumerate_periodic(n, m)   # every point; each case has >= 10 or all
        for j in param_indices(n):
            for p in pts:
                closed = dlambda_closed(n, m, j, p)
                numeric = dlambda_numeric(n, m, j, p, 1e-6)
                worst = max(worst, abs(closed - numeric) / max(1.0, abs(closed)))
            cases += 1
        if m == 1:
            for j in param_indices(n):
                worst_inf = max(worst_inf, abs(dlambda_numeric(n, 1, j, INFINITY, 1e-6) - dlambda_infinity(n, j)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-5 and worst_inf <= 1e-8 and elapsed < 60
    record_criterion(3, ok, f"max rel err {worst:.2e} (<= 1e-5), infinity row {worst_inf:.1e} "
                            f"(<= 1e-8), {cases} (n,m,j) cases, {elapsed:.1f}s (< 60s)")
    assert worst <= 1e-5
    assert worst_inf <= 1e-8
    assert elapsed < 60


def test_criterion_4_polynomial_structure(record_criterion):
    start = time.perf_counter()
    failures = []
    for n, m in itertools.product(range(2, 6), range(1, 5)):
        js = param_indices(n)
        polys = {j: poly_P(n, j, m) for j in js}
        for j in js:
            if polys[j].degree != deg_P(n, j, m):
                failures.append(("degree", n, j, m))
        pairs = []
        pairs += [(a, b) for a, b in itertools.combinations(range(n - 1), 2)]          # (a)
        if m >= 2:
            pairs += [(a, b) for a, b in itertools.combinations([j for j in js if j <= 2 * n - 2], 2)]
        if m >= 3:
            pairs += list(itertools.combinations(js, 2))
        for a, b in pairs:
            if not support_disjoint(polys[a], polys[b]):
                failures.append(("overlap", n, m, a, b))
    elapsed = time.perf_counter() - start
    record_criterion(4, not failures and elapsed < 5, f"{len(failures)} failures, {elapsed:.2f}s (< 5s)")
    assert not failures
    assert elapsed < 5


def test_criterion_5_factorization(record_criterion):
    start = time.perf_counter()
    worst = 0.0
    for n, m in itertools.product(range(2, 6), range(1, 5)):
        polys = {j: poly_P(n, j, m) for j in param_indices(n)}
        for p in enumerate_periodic(n, m):
            scale = p.power(-(n ** (m - 1)))
            for j, P in polys.items():
                closed = dlambda_closed(n, m, j, p)
                worst = max(worst, abs(closed - scale * eval_P_at_root(P, p)) / max(1.0, abs(closed)))
    elapsed = time.perf_counter() - start
    record_criterion(5, worst <= 1e-10 and elapsed < 10, f"max rel err {worst:.2e} (<= 1e-10), {elapsed:.2f}s (< 10s)")
    assert worst <= 1e-10
    assert elapsed < 10


def admissible_vectors(n):
    for combo in itertools.combinations_with_replacement((1, 3, 4), 2 * n - 2):
        if check_period_conditions(n, combo).ok:
            yield combo


def test_criterion_6_certificates(record_criterion):
    start = time.perf_counter()
    failures, count, worst = [], 0, 0.0
    for n in (3, 4):
        for m in admissible_vectors(n):
            count += 1
            try:
                cert = construct_certificate(n, m, tol=1e-4, h=1e-6)
                ver = verify_certificate(cert, 1e-6, 1e-4)
            except DynamicsError as exc:
                failures.append((n, m, repr(exc)))
                continue
            worst = max(worst, ver.max_rel_err)
            J = build_jacobian(cert.periodic_vector())
            for j, d in zip(J.cols, cert.leading_minor_dets):
                if not abs(d) > hadamard_threshold(leading_minor(J, j)):
                    failures.append((n, m, f"minor {j}"))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 600
    record_criterion(6, ok, f"{count - len(failures)}/{count} vectors certified, max oracle err "
                            f"{worst:.2e} (<= 1e-4), {elapsed:.1f}s (< 600s)")
    assert count == 39
    assert not failures, failures
    assert elapsed < 600


def test_criterion_7_condition_gate(record_criterion):
    r1 = check_period_conditions(3, (1, 1, 1, 1))
    r2 = check_period_conditions(3, (2, 3, 3, 3))
    r3 = check_period_conditions(3, (1, 1, 1, 3))
    ok = (not r1.cond_ii) and (not r2.cond_ii) and r3.ok
    record_criterion(7, ok, "(1,1,1,1) and (2,3,3,3) fail (ii); (1,1,1,3) accepted")
    assert not r1.cond_ii
    assert not r2.cond_ii
    assert r3.cond_i and r3.cond_ii


def _random_map(rng):
    n = int(rng.integers(2, 5))
    while True:
        num = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        den = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        try:
            return RationalMap(n, tuple(num), tuple(den))
        except DynamicsError:
            continue


def _two_cycle(f, rng):
    for _ in range(20):
        z0 = complex(rng.normal(), rng.normal())
        try:
            z = newton_periodic(f, z0, 2)
        except DynamicsError:
            continue
        if z is INFINITY:
            continue
        w = evaluate(f, z)
        if w is not INFINITY and abs(w - z) > 1e-3:
            return [z, w]
    return None


def test_criterion_8_conjugation_and_index(record_criterion):
    rng = np.random.default_rng(20261016)
    start = time.perf_counter()
    worst_index, worst_conj, cycles = 0.0, 0.0, 0
    for _ in range(100):
        f = _random_map(rng)
        worst_index = max(worst_index, abs(index_sum(f) - 1))
        while True:
            M = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))).tolist()
            if abs(np.linalg.det(np.array(M))) > 0.1:
                break
        g = mobius_conjugate(f, M)
        orbits = [[z] for z in fixed_points(f)]
        two = _two_cycle(f, rng)
        if two:
            orbits.append(two)
        for orbit in orbits:
            lam = multiplier(f, orbit)
            lam_g = multiplier(g, [apply_mobius(M, z) for z in orbit])
            worst_conj = max(worst_conj, abs(lam - lam_g) / max(1.0, abs(lam)))
            cycles += 1
    elapsed = time.perf_counter() - start
    ok = worst_index <= 1e-9 and worst_conj <= 1e-9 and elapsed < 30
    record_criterion(8, ok, f"|index-1| max {worst_index:.1e}, conjugation rel {worst_conj:.1e} "
                            f"over {cycles} cycles (<= 1e-9), {elapsed:.1f}s (< 30s)")
    assert worst_index <= 1e-9
    assert worst_conj <= 1e-9
    assert elapsed < 30


@pytest.mark.parametrize("periods", ["3,3,3,3"])
def test_criterion_9_determinism(record_criterion, periods):
    outputs = []
    for vec, n in ((periods, "3"), ("1,1,1,1,3,4", "4")):
        runs = [subprocess.run([sys.executable, "-m", "ratmult", "cert", "--n", n, "--periods", vec],
                               capture_output=True, check=True).stdout for _ in range(2)]
        outputs.append(runs[0] == runs[1])
    record_criterion(9, all(outputs), "repeated `cert` runs byte-identical")
    assert all(outputs)
