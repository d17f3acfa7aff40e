import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monofilt import lattice as lat
from monofilt.errors import DimensionMismatch, NotPrimary
from monofilt.lattice import MonomialIdeal


def I(*gens):
    return MonomialIdeal.from_generators(len(gens[0]), gens)


def brute_member(gens, beta):
    return any(all(g <= b for g, b in zip(gen, beta)) for gen in gens)


def test_membership():
    a = I((2, 0), (0, 3))
    assert not lat.member(a, (1, 1))
    assert lat.member(a, (2, 5))
    assert lat.member(MonomialIdeal.unit(2), (0, 0))


def test_ideal_operations():
    x, y = I((1, 0)), I((0, 1))
    assert lat.intersect(x, y).gens == ((1, 1),)
    m = MonomialIdeal.maximal(2)
    assert lat.product(m, m) == I((2, 0), (1, 1), (0, 2))
    assert set(lat.ideal_sum(I((2, 0)), I((0, 3))).gens) == {(2, 0), (0, 3)}


def test_colength_examples():
    assert lat.colength(lat.power(MonomialIdeal.maximal(2), 2)) == 3
    a = I((2, 0), (1, 2), (0, 3))
    assert lat.colength(a) == 5
    under = [p for p in itertools.product(range(4), repeat=2) if not lat.member(a, p)]
    assert sorted(under) == sorted([(0, 0), (1, 0), (0, 1), (0, 2), (1, 1)])
    with pytest.raises(NotPrimary):
        lat.colength(I((1, 0)))


def test_primary_test():
    assert lat.is_m_primary(I((2, 0), (0, 3)))
    assert not lat.is_m_primary(I((1, 1)))
    assert lat.is_m_primary(MonomialIdeal.unit(2))
    assert lat.colength(MonomialIdeal.unit(2)) == 0


def test_newton_polyhedron():
    from monofilt.polyhedra import UpBody

    assert lat.newton_polyhedron(I((2, 0), (0, 3))) == UpBody.halfspace((3, 2), 6)
    assert lat.newton_polyhedron(MonomialIdeal.maximal(2)) == UpBody.halfspace((1, 1), 1)
    assert lat.newton_polyhedron(I((2, 0), (1, 1), (0, 2))) == UpBody.halfspace((1, 1), 2)


def test_integral_closure():
    assert lat.integral_closure(I((2, 0), (0, 2))) == I((2, 0), (1, 1), (0, 2))
    m = MonomialIdeal.maximal(2)
    assert lat.integral_closure(m) == m
    closed = lat.integral_closure(I((4, 0), (0, 4)))
    assert closed == lat.power(m, 4)


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        lat.intersect(I((1, 0)), I((1, 0, 0)))
    with pytest.raises(DimensionMismatch):
        MonomialIdeal.from_generators(2, [(1, 2, 3)])


gens2 = st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=5)


@settings(max_examples=60, deadline=None)
@given(gens2, gens2)
def test_operations_match_membership(a, b):
    A, B = I(*a), I(*b)
    for beta in itertools.product(range(13), repeat=2):
        ma, mb = brute_member(a, beta), brute_member(b, beta)
        assert lat.member(lat.ideal_sum(A, B), beta) == (ma or mb)
        assert lat.member(lat.intersect(A, B), beta) == (ma and mb)
    # product: some splitting beta = g + h
    P = lat.product(A, B)
    for beta in itertools.product(range(13), repeat=2):
        expect = any(
            brute_member(a, g) and brute_member(b, tuple(x - y for x, y in zip(beta, g)))
            for g in itertools.product(*(range(c + 1) for c in beta))
        )
        assert lat.member(P, beta) == expect


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), gens2)
def test_colength_counts_standard_monomials(p, q, extra):
    A = I((p, 0), (0, q), *extra)
    count = sum(1 for beta in itertools.product(range(p), range(q)) if not brute_member(A.gens, beta))
    assert lat.colength(A) == count


@settings(max_examples=40, deadline=None)
@given(gens2)
def test_staircase_round_trip(a):
    A = I(*a)
    box = (8, 8)
    mask = np.array([[lat.member(A, (i, j)) for j in range(8)] for i in range(8)])
    assert lat.ideal_from_mask(mask) == lat.ideal_from_predicate(2, box, lambda b: lat.member(A, b))
    inside = lat.ideal_from_mask(mask)
    assert all(all(c < 8 for c in g) for g in inside.gens)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=6))
def test_minimize_is_antichain(points):
    mins = lat.minimize(points, 3)
    for p in points:
        assert any(all(m[i] <= p[i] for i in range(3)) for m in mins)
    for a, b in itertools.permutations(mins, 2):
        assert not all(a[i] <= b[i] for i in range(3))


def test_integral_closure_contains_ideal_and_is_idempotent():
    for a in [I((3, 0), (0, 5)), I((5, 0), (2, 2), (0, 4)), I((2, 0, 0), (0, 3, 0), (0, 0, 1))]:
        c = lat.integral_closure(a)
        assert lat.contains_ideal(c, a)
        assert lat.integral_closure(c) == c
