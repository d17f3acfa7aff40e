from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from monofilt import polyhedra as ph
from monofilt.errors import DimensionMismatch, SumNotConvex, UnboundedComplement
from monofilt.polyhedra import UpBody

H = UpBody.halfspace


def test_covolume_examples():
    assert ph.covolume(H((1, 1), 1)) == Fraction(1, 2)
    assert ph.covolume(H((2, 1), 2)) == 1
    assert ph.covolume(ph.minkowski_sum(H((1, 1), 1), H((2, 1), 2))) == Fraction(5, 2)


def test_minkowski_sum_examples():
    assert ph.minkowski_sum(H((1, 1), 1), H((1, 1), 2)) == H((1, 1), 3)
    s = ph.minkowski_sum(H((1, 1), 1), H((2, 1), 2))
    assert s.vertices == ((0, 3), (1, 1), (2, 0))
    with pytest.raises(ValueError):
        H((1, 1), 0)


def test_intersection_drops_redundant_facet():
    # on the orthant u+v = (2u+v)/2 + v/2 >= 1, so u+v >= 1 is redundant
    P = ph.intersect_bodies(H((1, 1), 1), H((2, 1), 2))
    assert P == H((2, 1), 2)
    assert ph.contains(H((1, 1), 1), H((2, 1), 2))


def test_scale_and_contains():
    assert ph.scale_body(H((1, 1), 1), 3) == H((1, 1), 3)
    assert ph.contains(H((1, 1), 1), H((1, 1), 2))
    assert not ph.contains(H((1, 1), 2), H((1, 1), 1))


def test_gauge_examples():
    assert ph.gauge_of(H((1, 1), 1))((3, 1)) == 4
    assert ph.gauge_of(H((2, 1), 2))((3, 1)) == Fraction(7, 2)
    g = ph.GaugeFunction(2, (((Fraction(1), Fraction(1)), Fraction(1)), ((Fraction(2), Fraction(1)), Fraction(2))))
    assert ph.body_of(g) == ph.intersect_bodies(H((1, 1), 1), H((2, 1), 2))


def test_support_min_examples():
    assert ph.support_min(H((1, 1), 1), (1, 2)) == 1
    assert ph.support_min(H((1, 1), 1), (1, 1)) == 1
    assert ph.support_min(H((3, 2), 6), (1, 1)) == 2


def test_affine_combination_examples():
    g = ph.gauge_of(H((1, 1), 1))
    for t in (0, Fraction(1, 3), 1):
        assert ph.affine_combination_body(g, g, t) == H((1, 1), 1)
    g1 = ph.gauge_of(H((1, 1), 2))
    t = Fraction(2, 5)
    assert ph.affine_combination_body(g, g1, t) == H((1 - t / 2, 1 - t / 2), 1)
    # valuations v_(1,1) and v_(2,2) interpolate to v_(1+t,1+t)
    g0 = ph.gauge_of(H((1, 1), 1))
    g2 = ph.gauge_of(H((2, 2), 1))
    assert ph.affine_combination_body(g0, g2, t) == H((1 + t, 1 + t), 1)


def test_unbounded_complement():
    P = H((1, 0), 1)
    assert not P.has_bounded_complement()
    with pytest.raises(UnboundedComplement):
        ph.covolume(P)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        ph.minkowski_sum(H((1, 1), 1), H((1, 1, 1), 1))


def test_union_rules():
    U = ph.union_of([H((2, 1), 2), H((1, 2), 2)])
    assert isinstance(U, ph.BodyUnion)
    with pytest.raises(SumNotConvex):
        ph.require_convex(U)
    # each part has covolume 1 and they overlap in the region below both lines
    inter = ph.covolume(ph.intersect_bodies(H((2, 1), 2), H((1, 2), 2)))
    assert ph.region_covolume(U) == 2 - inter
    assert ph.union_of([H((1, 1), 1), H((1, 1), 2)]) == H((1, 1), 1)


def test_polygon_and_hpoly_volume():
    sq = [(Fraction(0), Fraction(0)), (Fraction(2), Fraction(0)), (Fraction(2), Fraction(3)), (Fraction(0), Fraction(3))]
    assert ph.polygon_area(sq) == 6
    cube = [((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1), ((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0)]
    assert ph.hpoly_volume(3, cube) == 1
    simplex = [((1, 1, 1), 1), ((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0)]
    assert ph.hpoly_volume(3, simplex) == Fraction(1, 6)


# ---------------------------------------------------------------- properties


def _points(n):
    coord = st.fractions(min_value=0, max_value=4, max_denominator=3)
    point = st.tuples(*[coord] * n).filter(any)
    return st.lists(point, min_size=1, max_size=5).filter(
        lambda pts: all(any(p[i] > 0 for p in pts) for i in range(n))
    )


def _body(n):
    # include every axis point so the complement is bounded
    return _points(n).map(
        lambda pts: ph.up_hull(n, list(pts) + [tuple(Fraction(5) if j == i else Fraction(0) for j in range(n)) for i in range(n)])
    )


def _box_route(P):
    """Covolume as box volume minus the volume of P inside the box."""
    n = P.dim
    R = max(max(v) for v in P.vertices) + 1
    rows = [(tuple(-c for c in a), -b) for a, b in P.facets]
    rows += [(tuple(int(i == j) for j in range(n)), R) for i in range(n)]
    rows += [(tuple(-int(i == j) for j in range(n)), 0) for i in range(n)]
    return R**n - ph.hpoly_volume(n, rows)


@settings(max_examples=40, deadline=None)
@given(_body(2))
def test_covolume_two_routes_2d(P):
    assert ph.covolume(P) == _box_route(P)


@settings(max_examples=25, deadline=None)
@given(_body(3))
def test_covolume_two_routes_3d(P):
    exact = ph.covolume(P)
    assert exact == _box_route(P)
    # float route: qhull volume of the part of P inside the box
    R = max(max(v) for v in P.vertices) + 1
    corners = [tuple(R if (k >> i) & 1 else c for i, c in enumerate(v)) for v in P.vertices for k in range(8)]
    inside = ConvexHull(np.array(corners, dtype=float)).volume
    assert abs(float(R**3) - inside - float(exact)) < 1e-9 * float(R**3)


@settings(max_examples=40, deadline=None)
@given(_body(2), _body(2), st.tuples(st.integers(1, 5), st.integers(1, 5)))
def test_support_is_additive_under_sum(P, Q, alpha):
    S = ph.minkowski_sum(P, Q)
    assert ph.support_min(S, alpha) == ph.support_min(P, alpha) + ph.support_min(Q, alpha)


@settings(max_examples=40, deadline=None)
@given(_body(2), _body(2))
def test_intersection_membership(P, Q):
    R = ph.intersect_bodies(P, Q)
    for x in [(Fraction(i, 2), Fraction(j, 2)) for i in range(12) for j in range(12)]:
        assert R.contains_point(x) == (P.contains_point(x) and Q.contains_point(x))
    assert ph.contains(P, R) and ph.contains(Q, R)


@settings(max_examples=40, deadline=None)
@given(_body(2), st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4))
def test_scaling_and_gauge(P, c):
    S = ph.scale_body(P, c)
    assert ph.covolume(S) == c**2 * ph.covolume(P)
    assert ph.proportionality_constant(S, P) == c
    g = ph.gauge_of(P)
    for v in P.vertices:
        if any(v):
            assert g(v) == 1
    assert ph.gauge_of(S)((1, 1)) * c == g((1, 1))


@settings(max_examples=30, deadline=None)
@given(_body(2), _body(2), st.fractions(min_value=0, max_value=1, max_denominator=6))
def test_affine_combination_is_superlevel_set(P, Q, t):
    g0, g1 = ph.gauge_of(P), ph.gauge_of(Q)
    B = ph.affine_combination_body(g0, g1, t)
    for x in [(Fraction(i, 3), Fraction(j, 3)) for i in range(1, 15) for j in range(1, 15)]:
        assert B.contains_point(x) == ((1 - t) * g0(x) + t * g1(x) >= 1)
