import cmath
import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ratmult.errors import MultiplierOne, NotACycle, ResultantZero, SingularMobius
from ratmult.ratmap import (
    INFINITY,
    ParamVector,
    RationalMap,
    apply_mobius,
    evaluate,
    family_map,
    fixed_points,
    index_sum,
    iterate,
    mobius_conjugate,
    monomial_family,
    multiplier,
    resultant,
    same_map,
)

from conftest import unit


def power_map(n):
    return family_map(ParamVector.zeros(n))


def random_map(rng, n):
    num = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    den = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    return RationalMap(n, tuple(num), tuple(den))


def random_mobius(rng):
    while True:
        M = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if abs(np.linalg.det(M)) > 0.1:
            return M.tolist()


class TestFamily:
    def test_zero_parameters_give_power_map(self):
        f = power_map(3)
        assert f.num == (0, 0, 0, 1)
        assert f.den == (1, 0, 0, 0)

    def test_constant_term(self):
        f = family_map(ParamVector.basis(3, 0, 1))
        assert f.num == (1, 0, 0, 1)
        assert f.den == (1, 0, 0, 0)

    def test_denominator_sign(self):
        f = family_map(ParamVector.basis(2, 3, 1))
        assert f.num == (0, 0, 1)
        assert f.den == (1, -1, 0)

    def test_degenerate_parameters(self):
        # (z^2 - 1)/(1 - z) shares the root z = 1
        with pytest.raises(ResultantZero):
            family_map(ParamVector.from_mapping(2, {0: -1, 3: 1}))

    def test_excluded_indices_rejected(self):
        with pytest.raises(ValueError):
            ParamVector.basis(3, 2)
        with pytest.raises(ValueError):
            ParamVector.basis(3, 3)

    def test_monomial_family(self):
        assert monomial_family(2, 0, 0).num == (0, 0, 1)
        f = monomial_family(3, 1, 0.5)
        assert f.num == (0, 0.5, 0, 1)
        assert f.den == (1, 0, 0, 0)
        with pytest.raises(ValueError):
            monomial_family(4, 5, 0.1)


class TestEvaluate:
    def test_finite(self):
        assert evaluate(power_map(3), 2) == 8

    def test_infinity_fixed(self):
        assert evaluate(power_map(3), INFINITY) is INFINITY

    def test_pole(self):
        f = RationalMap(2, (0, 0, 1), (1, -1, 0))
        assert evaluate(f, 1) is INFINITY

    def test_finite_value_at_infinity(self):
        f = RationalMap(1, (1, 2), (3, 4))
        assert evaluate(f, INFINITY) == pytest.approx(0.5)

    def test_iterate(self):
        assert iterate(power_map(2), 2, 3) == 256
        assert iterate(power_map(3), INFINITY, 5) is INFINITY
        z = iterate(power_map(2), unit(1, 3), 2)
        assert abs(z - unit(4, 3)) < 1e-14

    @settings(max_examples=50, deadline=None)
    @given(m1=st.integers(1, 4), m2=st.integers(1, 4),
           re=st.floats(-2, 2), im=st.floats(-2, 2), seed=st.integers(0, 10))
    def test_iterate_composes(self, m1, m2, re, im, seed):
        f = random_map(np.random.default_rng(seed), 2)
        z = complex(re, im)
        whole = iterate(f, z, m1 + m2)
        split = iterate(f, iterate(f, z, m1), m2)
        if whole is INFINITY or split is INFINITY:
            assert whole is split
        else:
            assert abs(whole - split) <= 1e-12 * max(1, abs(whole)) * 1e3


class TestMultiplier:
    def test_fixed_point(self):
        assert multiplier(power_map(3), [1]) == pytest.approx(3)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_superattracting_infinity(self, n):
        assert multiplier(power_map(n), [INFINITY]) == 0

    def test_two_cycle(self):
        lam = multiplier(power_map(2), [unit(1, 3), unit(2, 3)])
        assert abs(lam - 4) < 1e-12

    def test_not_a_cycle(self):
        with pytest.raises(NotACycle):
            multiplier(power_map(2), [unit(1, 3)])

    @pytest.mark.parametrize("n,m", [(2, 1), (2, 3), (3, 2), (4, 3)])
    def test_power_map_cycles(self, n, m):
        M = n ** m - 1
        for k in range(M):
            z = unit(k, M)
            orbit = [unit(k * n ** i, M) for i in range(m)]
            if abs(iterate(power_map(n), z, m) - z) > 1e-9:
                continue
            lam = multiplier(power_map(n), orbit)
            assert abs(abs(lam) - n ** m) <= 1e-9 * n ** m

    def test_cycle_through_infinity_chart(self):
        # z -> 1/z^2 swaps 0 and infinity; the two-cycle is superattracting
        f = RationalMap(2, (1, 0, 0), (0, 0, 1))
        assert multiplier(f, [0j, INFINITY]) == 0
        # fixed point 1 has multiplier -2
        assert multiplier(f, [1]) == pytest.approx(-2)


class TestResultant:
    def test_power_map(self):
        assert resultant((0, 0, 1), (1, 0, 0)) == pytest.approx(1)

    def test_common_root(self):
        assert resultant((0, 1), (0, 1)) == 0

    def test_family_at_zero(self):
        f = power_map(3)
        assert abs(resultant(f.num, f.den)) > 0

    @pytest.mark.parametrize("seed", range(5))
    def test_against_root_product(self, seed):
        # Res(p, q) = a_n^n * prod q(alpha_i) for monic-degree pairs
        rng = np.random.default_rng(seed)
        n = 3
        p = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        q = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        alphas = np.roots(p[::-1])
        expected = p[-1] ** n * np.prod(np.polyval(q[::-1], alphas))
        assert abs(resultant(tuple(p), tuple(q)) - expected) <= 1e-10 * abs(expected)


class TestMobius:
    def test_identity(self):
        f = power_map(4)
        assert same_map(mobius_conjugate(f, [[1, 0], [0, 1]]), f)

    def test_inversion_symmetry(self):
        f = power_map(3)
        assert same_map(mobius_conjugate(f, [[0, 1], [1, 0]]), f)

    def test_scaling(self):
        g = mobius_conjugate(power_map(2), [[2, 0], [0, 1]])
        assert same_map(g, RationalMap(2, (0, 0, 0.5), (1, 0, 0)))

    def test_singular(self):
        with pytest.raises(SingularMobius):
            mobius_conjugate(power_map(2), [[1, 2], [2, 4]])

    @pytest.mark.parametrize("seed", range(10))
    def test_conjugacy_relation(self, seed):
        # g(M(z)) == M(f(z)) pointwise
        rng = np.random.default_rng(seed)
        f = random_map(rng, int(rng.integers(2, 5)))
        M = random_mobius(rng)
        g = mobius_conjugate(f, M)
        for z in rng.normal(size=5) + 1j * rng.normal(size=5):
            lhs = evaluate(g, apply_mobius(M, z))
            rhs = apply_mobius(M, evaluate(f, z))
            from ratmult.ratmap import chordal_distance
            assert chordal_distance(lhs, rhs) < 1e-9


class TestIndexFormula:
    def test_quadratic(self):
        assert index_sum(power_map(2)) == pytest.approx(1, abs=1e-12)

    def test_cubic(self):
        pts = fixed_points(power_map(3))
        assert sum(p is INFINITY for p in pts) == 1
        assert index_sum(power_map(3)) == pytest.approx(1, abs=1e-12)

    def test_parabolic_rejected(self):
        with pytest.raises(MultiplierOne):
            index_sum(RationalMap(2, (0, 1, 1), (1, 0, 0)))

    def test_fixed_point_count(self):
        rng = np.random.default_rng(3)
        for n in (2, 3, 4):
            assert len(fixed_points(random_map(rng, n))) == n + 1
