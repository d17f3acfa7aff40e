"""Exact geometry of up-closed convex polyhedra in the positive orthant.

An ``UpBody`` is {x >= 0 : <a_j, x> >= b_j for all j} with a_j >= 0 nonzero and
b_j > 0.  Its facets are kept irredundant and in a canonical form (primitive
integer normal, rational offset, sorted), so equality of bodies is equality of
facet tuples.

Redundancy removal and vertex enumeration both reduce to one routine, the
exact up-hull of a point set: with c_j = a_j / b_j, the facet j is irredundant
iff c_j is a vertex of conv{c} + orthant, and the vertices of the body are
a/b for the facets <a, y> >= b of that dual up-hull.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import DimensionMismatch, SumNotConvex, UnboundedComplement
from .rational import dot

Vec = tuple[Fraction, ...]
Facet = tuple[tuple[int, ...], Fraction]


# ---------------------------------------------------------------- linear algebra


def _det(rows: Sequence[Sequence]) -> Fraction | int:
    """Determinant by fraction-free elimination (exact for ints or Fractions)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _rank(vectors: Iterable[Sequence]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    if not rows:
        return 0
    ncols = len(rows[0])
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / p[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], p)]
        rank += 1
    return rank


def _solve(A: Sequence[Sequence], b: Sequence) -> Vec | None:
    """Unique solution of the square system A x = b, or None if singular."""
    n = len(A)
    m = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(A, b)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col]
        inv = 1 / p[col]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col] * inv
                m[i] = [a - f * c for a, c in zip(m[i], p)]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def _normal_of(vectors: Sequence[Sequence[int]], n: int) -> tuple[int, ...]:
    """Integer vector orthogonal to n-1 given integer vectors (cofactor expansion)."""
    out = []
    for i in range(n):
        minor = [[v[j] for j in range(n) if j != i] for v in vectors]
        out.append((-1) ** i * int(_det(minor)))
    return tuple(out)


def _primitive(normal: Sequence[Fraction], offset: Fraction) -> Facet:
    den = reduce(math.lcm, (Fraction(x).denominator for x in normal), 1)
    ints = [int(Fraction(x) * den) for x in normal]
    g = reduce(math.gcd, ints, 0)
    return tuple(v // g for v in ints), Fraction(offset) * den / g


def _minimal_points(points: Sequence[Vec]) -> list[Vec]:
    pts = sorted(set(points), key=lambda p: (sum(p), p))
    kept: list[Vec] = []
    for p in pts:
        if not any(all(k[i] <= p[i] for i in range(len(p))) for k in kept):
            kept.append(p)
    return kept


# ---------------------------------------------------------------- up-hulls


def _up_hull_1d(points: list[Vec]) -> tuple[list[Facet], list[Vec]]:
    p = min(points)
    if p[0] == 0:
        return [], [p]
    return [((1,), p[0])], [p]


def _up_hull_2d(points: list[Vec]) -> tuple[list[Facet], list[Vec]]:
    pts = sorted(set(points))
    stair = []
    for p in pts:  # x ascending: keep points with strictly smaller y
        if not stair or p[1] < stair[-1][1]:
            stair.append(p)
    chain: list[Vec] = []
    for p in stair:
        while len(chain) >= 2:
            o, a = chain[-2], chain[-1]
            cross = (a[0] - o[0]) * (p[1] - a[1]) - (a[1] - o[1]) * (p[0] - a[0])
            if cross > 0:
                break
            chain.pop()
        chain.append(p)
    if chain[0] == (0, 0):
        return [], [chain[0]]
    facets: list[Facet] = []
    if chain[0][0] > 0:
        facets.append(((1, 0), chain[0][0]))
    for p, q in zip(chain, chain[1:]):
        normal = (p[1] - q[1], q[0] - p[0])
        facets.append(_primitive(normal, normal[0] * p[0] + normal[1] * p[1]))
    if chain[-1][1] > 0:
        facets.append(((0, 1), chain[-1][1]))
    return facets, chain


def _qhull_candidates(points: list[Vec], n: int) -> list[Vec]:
    """Points that floating-point qhull reports as up-hull vertices."""
    import numpy as np
    from scipy.spatial import ConvexHull

    arr = np.array([[float(x) for x in p] for p in points])
    far = 4.0 * (arr.max() + 1.0)
    shifted = [arr]
    for i in range(n):
        s = arr.copy()
        s[:, i] += far
        shifted.append(s)
    hull = ConvexHull(np.vstack(shifted))
    return [points[i] for i in sorted(set(hull.vertices)) if i < len(points)]


def _up_hull_nd(points: list[Vec], n: int) -> tuple[list[Facet], list[Vec]]:
    pts = _minimal_points(points)
    if any(all(c == 0 for c in p) for p in pts):
        return [], [tuple(Fraction(0) for _ in range(n))]
    cand = pts if len(pts) <= 24 else _qhull_candidates(pts, n)
    while True:
        facets = _hull_from_candidates(cand, n)
        missing = [p for p in pts if p not in cand and not all(dot(a, p) >= b for a, b in facets)]
        if not missing:
            break
        cand = cand + missing
    verts = []
    for p in cand:
        tight = [a for a, b in facets if dot(a, p) == b]
        tight += [tuple(int(i == j) for j in range(n)) for i in range(n) if p[i] == 0]
        if _rank(tight) == n:
            verts.append(p)
    return facets, verts


def _hull_from_candidates(pts: list[Vec], n: int) -> list[Facet]:
    den = reduce(math.lcm, (x.denominator for p in pts for x in p), 1)
    ipts = [tuple(int(x * den) for x in p) for p in pts]
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    gens = ipts + rays
    V = len(ipts)
    found: set[Facet] = set()
    for combo in itertools.combinations(range(V + n), n):
        if combo[0] >= V:
            continue
        p0 = gens[combo[0]]
        dirs = []
        for idx in combo[1:]:
            g = gens[idx]
            dirs.append(tuple(a - b for a, b in zip(g, p0)) if idx < V else g)
        normal = _normal_of(dirs, n)
        if all(c <= 0 for c in normal):
            normal = tuple(-c for c in normal)
        if any(c < 0 for c in normal) or not any(normal):
            continue
        b = sum(a * c for a, c in zip(normal, p0))
        if b <= 0:
            continue
        if all(sum(a * c for a, c in zip(normal, q)) >= b for q in ipts):
            g = reduce(math.gcd, normal + (b,), 0)
            found.add((tuple(c // g for c in normal), Fraction(b // g, den)))
    return sorted(found)


def _up_hull(points: Sequence[Sequence], n: int) -> tuple[list[Facet], list[Vec]]:
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if not pts:
        raise ValueError("up-hull of an empty point set")
    if any(len(p) != n for p in pts):
        raise DimensionMismatch("point of wrong dimension")
    if n == 1:
        return _up_hull_1d(pts)
    if n == 2:
        return _up_hull_2d(pts)
    return _up_hull_nd(pts, n)


# ---------------------------------------------------------------- bodies


class UpBody:
    """Up-closed convex polyhedron {x >= 0 : <normal, x> >= offset} in canonical form."""

    __slots__ = ("dim", "facets", "_vertices", "_bounded_faces")

    def __init__(self, dim: int, facets: Iterable[tuple[Sequence, object]] = (), *, _canonical=False, _vertices=None):
        self.dim = dim
        self._bounded_faces = None
        if _canonical:
            self.facets = tuple(facets)
            self._vertices = _vertices
            return
        raw = []
        for normal, offset in facets:
            normal = tuple(Fraction(x) for x in normal)
            offset = Fraction(offset)
            if len(normal) != dim:
                raise DimensionMismatch(f"normal {normal} in dimension {dim}")
            if any(x < 0 for x in normal) or not any(normal):
                raise ValueError("facet normals must be non-negative and nonzero")
            if offset <= 0:
                raise ValueError("facet offsets must be positive")
            raw.append((normal, offset))
        if not raw:
            self.facets = ()
            self._vertices = (tuple(Fraction(0) for _ in range(dim)),)
            return
        duals = {tuple(x / off for x in normal): (normal, off) for normal, off in raw}
        qfacets, qverts = _up_hull(list(duals), dim)
        self.facets = tuple(sorted(_primitive(*duals[c]) for c in qverts))
        self._vertices = tuple(sorted(tuple(Fraction(x) / b for x in a) for a, b in qfacets))

    @classmethod
    def orthant(cls, dim: int) -> UpBody:
        return cls(dim, ())

    @classmethod
    def halfspace(cls, normal: Sequence, offset=1) -> UpBody:
        return cls(len(normal), [(normal, offset)])

    def __eq__(self, other):
        return isinstance(other, UpBody) and self.dim == other.dim and self.facets == other.facets

    def __hash__(self):
        return hash((self.dim, self.facets))

    def __repr__(self):
        inner = ", ".join(f"{_fmt_form(a)} >= {b}" for a, b in self.facets)
        return f"UpBody(dim={self.dim}, {{{inner}}})"

    @property
    def vertices(self) -> tuple[Vec, ...]:
        if self._vertices is None:
            duals = [tuple(Fraction(x) / b for x in a) for a, b in self.facets]
            qfacets, _ = _up_hull(duals, self.dim)
            self._vertices = tuple(sorted(tuple(Fraction(x) / b for x in a) for a, b in qfacets))
        return self._vertices

    def contains_point(self, x: Sequence) -> bool:
        if any(c < 0 for c in x):
            return False
        return all(dot(a, x) >= b for a, b in self.facets)

    def has_bounded_complement(self) -> bool:
        return all(all(c > 0 for c in a) for a, _ in self.facets)

    def axis_intercepts(self) -> tuple[Fraction, ...]:
        """Smallest t with t*e_i in the body, per axis."""
        if not self.has_bounded_complement():
            raise UnboundedComplement("an axis never enters the body")
        return tuple(max((b / a[i] for a, b in self.facets), default=Fraction(0)) for i in range(self.dim))

    def gauge(self) -> GaugeFunction:
        return gauge_of(self)


def _fmt_form(a: Sequence[int]) -> str:
    names = "uvwz" if len(a) <= 4 else [f"x{i}" for i in range(len(a))]
    return "+".join((f"{c}{names[i]}" if c != 1 else names[i]) for i, c in enumerate(a) if c)


def up_hull(dim: int, points: Iterable[Sequence]) -> UpBody:
    """conv(points) + orthant as an UpBody."""
    facets, verts = _up_hull(list(points), dim)
    return UpBody(dim, sorted(facets), _canonical=True, _vertices=tuple(sorted(verts)))


def _check(P, Q) -> None:
    if P.dim != Q.dim:
        raise DimensionMismatch(f"dimensions {P.dim} and {Q.dim} differ")


def minkowski_sum(P: UpBody, Q: UpBody) -> UpBody:
    _check(P, Q)
    sums = [tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices]
    return up_hull(P.dim, sums)


def intersect_bodies(P: UpBody, Q: UpBody) -> UpBody:
    _check(P, Q)
    return UpBody(P.dim, P.facets + Q.facets)


def scale_body(P: UpBody, c) -> UpBody:
    """The body c*P."""
    c = Fraction(c)
    if c <= 0:
        raise ValueError("scale factor must be positive")
    verts = tuple(tuple(c * x for x in v) for v in P.vertices)
    return UpBody(P.dim, tuple((a, b * c) for a, b in P.facets), _canonical=True, _vertices=verts)


def contains(P: UpBody, Q: UpBody) -> bool:
    """True iff Q is a subset of P."""
    _check(P, Q)
    return all(min(dot(a, v) for v in Q.vertices) >= b for a, b in P.facets)


def support_min(P: UpBody, alpha: Sequence) -> Fraction:
    alpha = tuple(Fraction(x) for x in alpha)
    if any(x <= 0 for x in alpha):
        raise ValueError("weight must be strictly positive")
    return min(dot(alpha, v) for v in P.vertices)


def proportionality_constant(P: UpBody, Q: UpBody) -> Fraction | None:
    """c with P = c*Q, if one exists."""
    _check(P, Q)
    if [a for a, _ in P.facets] != [a for a, _ in Q.facets]:
        return None
    if not P.facets:
        return Fraction(1)
    ratios = {bp / bq for (_, bp), (_, bq) in zip(P.facets, Q.facets)}
    return ratios.pop() if len(ratios) == 1 else None


# ---------------------------------------------------------------- volumes


def _vertex_enumeration(rows: Sequence[tuple[Sequence, Fraction]], n: int) -> list[Vec]:
    """Vertices of the bounded polytope {x : <a, x> <= b} by exhaustive basis search."""
    found = set()
    for combo in itertools.combinations(rows, n):
        x = _solve([a for a, _ in combo], [b for _, b in combo])
        if x is None or x in found:
            continue
        if all(dot(a, x) <= b for a, b in rows):
            found.add(x)
    return sorted(found)


def polytope_vertices(dim: int, rows: Sequence[tuple[Sequence, object]]) -> list[Vec]:
    """Vertices of the bounded polytope {x : <a, x> <= b}."""
    return _vertex_enumeration([(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in rows], dim)


def _hull_2d(points: Sequence[Vec]) -> list[Vec]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) > 0:
                    break
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def polygon_area(points: Sequence[Vec]) -> Fraction:
    """Area of the convex hull of planar points."""
    ring = _hull_2d(points)
    if len(ring) < 3:
        return Fraction(0)
    twice = sum(p[0] * q[1] - p[1] * q[0] for p, q in zip(ring, ring[1:] + ring[:1]))
    return abs(Fraction(twice)) / 2


def _pulling_simplices(face: frozenset, d: int, verts: Sequence[Vec], tight: Sequence[frozenset]) -> list[list[int]]:
    """Triangulate a d-dimensional face (given by vertex indices) by pulling its least vertex."""
    if d == 0:
        return [[min(face)]]
    v0 = min(face)
    out = []
    seen = set()
    for T in tight:
        S = face & T
        if v0 in S or len(S) < d or S in seen:
            continue
        seen.add(S)
        base = verts[min(S)]
        if _rank([tuple(a - b for a, b in zip(verts[i], base)) for i in S]) != d - 1:
            continue
        for simplex in _pulling_simplices(S, d - 1, verts, tight):
            out.append([v0] + simplex)
    return out


def _simplex_volume(points: Sequence[Vec]) -> Fraction:
    base = points[0]
    rows = [tuple(a - b for a, b in zip(p, base)) for p in points[1:]]
    return abs(Fraction(_det(rows))) / math.factorial(len(rows))


def hpoly_volume(dim: int, rows: Sequence[tuple[Sequence, object]]) -> Fraction:
    """Exact volume of the bounded polytope {x : <a, x> <= b}."""
    rows = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in rows]
    verts = _vertex_enumeration(rows, dim)
    if len(verts) <= dim:
        return Fraction(0)
    if dim == 1:
        return max(v[0] for v in verts) - min(v[0] for v in verts)
    if dim == 2:
        return polygon_area(verts)
    if _rank([tuple(a - b for a, b in zip(v, verts[0])) for v in verts]) < dim:
        return Fraction(0)
    tight = [frozenset(i for i, v in enumerate(verts) if dot(a, v) == b) for a, b in rows]
    total = Fraction(0)
    for simplex in _pulling_simplices(frozenset(range(len(verts))), dim, verts, tight):
        total += _simplex_volume([verts[i] for i in simplex])
    return total


def covolume(P: UpBody) -> Fraction:
    """Exact volume of the orthant minus P (cone from the origin over each facet)."""
    if not P.has_bounded_complement():
        raise UnboundedComplement(f"{P!r} has unbounded complement")
    if not P.facets:
        return Fraction(0)
    n = P.dim
    verts = list(P.vertices)
    if n == 1:
        return verts[0][0]
    if n == 2:
        return sum((abs(p[0] * q[1] - p[1] * q[0]) / 2 for p, q in zip(verts, verts[1:])), Fraction(0))
    origin = tuple(Fraction(0) for _ in range(n))
    tight_facets = [frozenset(i for i, v in enumerate(verts) if dot(a, v) == b) for a, b in P.facets]
    tight_axes = [frozenset(i for i, v in enumerate(verts) if v[k] == 0) for k in range(n)]
    tight = tight_facets + tight_axes
    total = Fraction(0)
    for face in tight_facets:
        for simplex in _pulling_simplices(face, n - 1, verts, tight):
            total += _simplex_volume([origin] + [verts[i] for i in simplex])
    return total


# ---------------------------------------------------------------- gauges


@dataclass(frozen=True)
class GaugeFunction:
    """x -> min_j <normal_j, x> / scale_j; concave and 1-homogeneous."""

    dim: int
    pieces: tuple[tuple[Vec, Fraction], ...]

    def __post_init__(self):
        for normal, scale in self.pieces:
            if len(normal) != self.dim:
                raise DimensionMismatch("gauge piece of wrong dimension")
            if any(x < 0 for x in normal) or not any(normal) or scale <= 0:
                raise ValueError("gauge pieces need non-negative nonzero normals and positive scales")

    def __call__(self, x: Sequence) -> Fraction:
        if not self.pieces:
            raise ValueError("gauge of the whole orthant is infinite")
        return min(dot(normal, x) / scale for normal, scale in self.pieces)

    def linear_forms(self) -> list[Vec]:
        return [tuple(c / scale for c in normal) for normal, scale in self.pieces]


def gauge_of(P: UpBody) -> GaugeFunction:
    return GaugeFunction(P.dim, tuple((tuple(Fraction(c) for c in a), b) for a, b in P.facets))


def body_of(g: GaugeFunction, level=1) -> UpBody:
    level = Fraction(level)
    if level <= 0:
        raise ValueError("level must be positive")
    return UpBody(g.dim, [(normal, scale * level) for normal, scale in g.pieces])


def affine_combination_body(g0: GaugeFunction, g1: GaugeFunction, t) -> UpBody:
    """{x : (1-t) g0(x) + t g1(x) >= 1}; the min-pieces combine pairwise."""
    if g0.dim != g1.dim:
        raise DimensionMismatch("gauges of different dimension")
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    if t == 0:
        return body_of(g0)
    if t == 1:
        return body_of(g1)
    forms = {
        tuple((1 - t) * a + t * b for a, b in zip(f0, f1))
        for f0 in g0.linear_forms()
        for f1 in g1.linear_forms()
    }
    return UpBody(g0.dim, [(f, 1) for f in forms])


# ---------------------------------------------------------------- unions


class BodyUnion:
    """Finite union of UpBodies (the limit region of an ideal sum)."""

    __slots__ = ("dim", "parts")

    def __init__(self, parts: Iterable[UpBody]):
        parts = list(dict.fromkeys(parts))
        keep = [p for i, p in enumerate(parts) if not any(j != i and contains(q, p) and (q != p) for j, q in enumerate(parts))]
        self.parts = tuple(sorted(keep, key=lambda b: b.facets))
        self.dim = self.parts[0].dim

    def __eq__(self, other):
        return isinstance(other, BodyUnion) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "BodyUnion(" + ", ".join(map(repr, self.parts)) + ")"

    def hull(self) -> UpBody:
        return up_hull(self.dim, [v for p in self.parts for v in p.vertices])


def union_of(parts: Iterable[UpBody]) -> UpBody | BodyUnion:
    u = BodyUnion(parts)
    return u.parts[0] if len(u.parts) == 1 else u


def region_parts(R: UpBody | BodyUnion) -> tuple[UpBody, ...]:
    return R.parts if isinstance(R, BodyUnion) else (R,)


def require_convex(R: UpBody | BodyUnion) -> UpBody:
    if isinstance(R, BodyUnion):
        raise SumNotConvex("operation needs a convex limit body, got a union")
    return R


def region_covolume(R: UpBody | BodyUnion) -> Fraction:
    """Covolume of a body or a union of bodies (inclusion-exclusion)."""
    parts = region_parts(R)
    total = Fraction(0)
    for k in range(1, len(parts) + 1):
        for subset in itertools.combinations(parts, k):
            body = reduce(intersect_bodies, subset)
            total += (-1) ** (k + 1) * covolume(body)
    return total
