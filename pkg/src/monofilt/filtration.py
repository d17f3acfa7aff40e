"""Expression language for monomial m-filtrations.

Every node describes a family of monomial ideals a_lam (lam >= 0, a_0 = R).
All computations go through the jump function jump(F, beta), the largest lam
with x^beta in a_lam, or through the asymptotic limit body {gauge >= 1}.

Jump values over a box are held as integer numpy grids with one common
denominator, which keeps the box scans exact and fast.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence, Union

import numpy as np

from . import lattice as lat
from . import polyhedra as ph
from .errors import DimensionMismatch, InvalidInput, NotPrimary, SumNotConvex, SumNotConvexWarning
from .lattice import MonomialIdeal
from .rational import dot, frac


@dataclass(frozen=True)
class Val:
    alpha: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(frac(a) for a in self.alpha))
        if not self.alpha or any(a <= 0 for a in self.alpha):
            raise InvalidInput("valuation weights must be strictly positive")

    @property
    def dim(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class Pow:
    base: MonomialIdeal

    def __post_init__(self):
        if not lat.is_m_primary(self.base) or self.base.is_unit:
            raise NotPrimary(f"power filtrations need a proper primary ideal, got {self.base}")

    @property
    def dim(self) -> int:
        return self.base.dim


@dataclass(frozen=True)
class MulConst:
    c: MonomialIdeal
    f: Filtration

    def __post_init__(self):
        if self.c.is_zero:
            raise InvalidInput("multiplier ideal must be nonzero")
        if self.c.dim != self.f.dim:
            raise DimensionMismatch("multiplier and filtration dimensions differ")

    @property
    def dim(self) -> int:
        return self.c.dim


@dataclass(frozen=True)
class Scale:
    r: Fraction
    f: Filtration

    def __post_init__(self):
        object.__setattr__(self, "r", frac(self.r))
        if self.r <= 0:
            raise InvalidInput("scale factor must be positive")

    @property
    def dim(self) -> int:
        return self.f.dim


@dataclass(frozen=True)
class _Binary:
    f: Filtration
    g: Filtration

    def __post_init__(self):
        if self.f.dim != self.g.dim:
            raise DimensionMismatch("operand dimensions differ")

    @property
    def dim(self) -> int:
        return self.f.dim


@dataclass(frozen=True)
class Prod(_Binary):
    pass


@dataclass(frozen=True)
class Inter(_Binary):
    pass


@dataclass(frozen=True)
class Sum(_Binary):
    pass


@dataclass(frozen=True)
class Geo:
    f: Filtration
    g: Filtration
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", frac(self.t))
        if self.f.dim != self.g.dim:
            raise DimensionMismatch("operand dimensions differ")
        if not 0 <= self.t <= 1:
            raise InvalidInput("geodesic parameter must lie in [0, 1]")
        if has_sum(self.f) or has_sum(self.g):
            raise SumNotConvex("geodesic operands must have convex limit bodies")

    @property
    def dim(self) -> int:
        return self.f.dim


Filtration = Union[Val, Pow, MulConst, Scale, Prod, Inter, Sum, Geo]


def children(F: Filtration) -> tuple:
    if isinstance(F, (MulConst, Scale)):
        return (F.f,)
    if isinstance(F, (Prod, Inter, Sum, Geo)):
        return (F.f, F.g)
    return ()


def has_sum(F: Filtration) -> bool:
    return isinstance(F, Sum) or any(has_sum(c) for c in children(F))


def is_primary(F: Filtration) -> bool:
    """True iff every a_lam with lam > 0 has finite colength."""
    if isinstance(F, (Val, Pow)):
        return True
    if isinstance(F, MulConst):
        return lat.is_m_primary(F.c) and is_primary(F.f)
    if isinstance(F, Scale):
        return is_primary(F.f)
    if isinstance(F, Sum):
        return is_primary(F.f) or is_primary(F.g)
    if isinstance(F, Geo):
        return (F.t < 1 and is_primary(F.f)) or (F.t > 0 and is_primary(F.g))
    return is_primary(F.f) and is_primary(F.g)


def _require_primary(F: Filtration) -> None:
    if not is_primary(F):
        raise NotPrimary("some member ideal of this filtration has infinite colength")


# ---------------------------------------------------------------- jump grids


@dataclass(frozen=True)
class JumpGrid:
    """Exact jump values num / den over the box prod(range(s) for s in shape)."""

    num: np.ndarray
    den: int

    def at(self, beta) -> Fraction:
        return Fraction(int(self.num[tuple(beta)]), self.den)

    def geq(self, lam) -> np.ndarray:
        lam = frac(lam)
        return self.num * lam.denominator >= lam.numerator * self.den

    def values(self) -> list[Fraction]:
        return sorted({Fraction(int(v), self.den) for v in np.unique(self.num)})


def _rescale(num: np.ndarray, den: int, target: int) -> np.ndarray:
    return num * (target // den)


def _common(a: JumpGrid, b: JumpGrid) -> tuple[np.ndarray, np.ndarray, int]:
    L = math.lcm(a.den, b.den)
    return _rescale(a.num, a.den, L), _rescale(b.num, b.den, L), L


def _reduced(num: np.ndarray, den: int) -> JumpGrid:
    g = math.gcd(int(np.gcd.reduce(num.ravel())) if num.size else 0, den)
    if g > 1:
        num, den = num // g, den // g
    if num.dtype != object and num.size and int(np.abs(num).max()) > 2**52:
        num = num.astype(object)
    return JumpGrid(num, den)


def _closure(K: np.ndarray, gens: list[tuple[int, ...]]) -> None:
    """In place: K[b] = max(K[b], K[b - g] + 1) closed under all generators g."""
    if not gens:
        return
    if K.ndim == 1:
        p = min(g[0] for g in gens)
        if p == 0:
            raise NotPrimary("unit generator in a power filtration")
        for r in range(min(p, K.shape[0])):
            sub = K[r::p]
            q = np.arange(sub.shape[0])
            K[r::p] = np.maximum.accumulate(sub - q) + q
        return
    lead = [g for g in gens if g[0] > 0]
    flat = list(lat.minimize([g[1:] for g in gens if g[0] == 0], K.ndim - 1))
    for i in range(K.shape[0]):
        row = K[i]
        for g in lead:
            if g[0] > i or any(h >= n for h, n in zip(g[1:], row.shape)):
                continue
            dst = tuple(slice(h, None) for h in g[1:])
            src = tuple(slice(0, n - h) for h, n in zip(g[1:], row.shape))
            np.maximum(row[dst], K[i - g[0]][src] + 1, out=row[dst])
        _closure(row, flat)


def _index_grid(shape, weights) -> np.ndarray:
    out = np.zeros(shape, dtype=np.int64)
    for axis, w in enumerate(weights):
        view = [1] * len(shape)
        view[axis] = shape[axis]
        out = out + (np.arange(shape[axis], dtype=np.int64) * w).reshape(view)
    return out


def _prod_levels(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(max, min)-convolution of two monotone grids, one level at a time.

    out >= v exactly when beta lies in U_a(v) + U_b(v), the sum of the two
    superlevel sets.  Along the last axis each superlevel set is described by
    its column profile (first member of every column), and the profile of the
    sum is the (min, +)-convolution of the two profiles over the head axes.
    """
    shape = a.shape
    top = shape[-1]
    levels = np.unique(np.concatenate([a.ravel(), b.ravel()]))
    heads = shape[:-1]

    def profiles(g):
        cols = g.reshape(-1, top)
        prof = np.stack([np.searchsorted(col, levels, side="left") for col in cols], axis=1)
        return prof.reshape((len(levels),) + heads)

    pa, pb = profiles(a), profiles(b)
    best = np.full(pa.shape, top, dtype=np.int64)
    for s in np.ndindex(*heads):
        dst = (slice(None),) + tuple(slice(h, None) for h in s)
        src = (slice(None),) + tuple(slice(0, n - h) for h, n in zip(s, heads))
        np.minimum(best[dst], pa[(slice(None),) + s][(...,) + (None,) * len(heads)] + pb[src], out=best[dst])
    # count the levels reached at every height, then read off the top one
    hits = np.zeros(heads + (top + 1,), dtype=np.int64)
    idx = tuple(np.indices(heads).reshape(len(heads), -1)) if heads else ()
    for row in best.reshape(len(levels), -1):
        np.add.at(hits, idx + (np.minimum(row, top),), 1)
    reached = np.cumsum(hits, axis=-1)[..., :top]
    return levels[np.maximum(reached - 1, 0)]


def jump_grid(F: Filtration, shape: Sequence[int], cap=None) -> JumpGrid:
    """Exact jump values of F at every exponent of the box with the given extents.

    With ``cap`` set, values below the cap are exact and the others are only
    guaranteed to be at least the cap, which is all a membership test needs.
    """
    shape = tuple(int(s) for s in shape)
    if len(shape) != F.dim:
        raise DimensionMismatch("box of wrong dimension")
    cap = None if cap is None else frac(cap)
    if isinstance(F, Val):
        den = reduce(math.lcm, (a.denominator for a in F.alpha), 1)
        return _reduced(_index_grid(shape, [int(a * den) for a in F.alpha]), den)
    if isinstance(F, Pow):
        K = np.zeros(shape, dtype=np.int64)
        _closure(K, list(F.base.gens))
        return JumpGrid(K, 1)
    if isinstance(F, MulConst):
        inner = jump_grid(F.f, shape, cap)
        out = np.zeros(shape, dtype=inner.num.dtype)
        for g in F.c.gens:
            if any(h >= n for h, n in zip(g, shape)):
                continue
            dst = tuple(slice(h, None) for h in g)
            src = tuple(slice(0, n - h) for h, n in zip(g, shape))
            out[dst] = np.maximum(out[dst], inner.num[src])
        return JumpGrid(out, inner.den)
    if isinstance(F, Scale):
        inner = jump_grid(F.f, shape, None if cap is None else cap * F.r)
        return _reduced(inner.num * F.r.denominator, inner.den * F.r.numerator)
    if isinstance(F, (Inter, Sum)):
        a, b, L = _common(jump_grid(F.f, shape, cap), jump_grid(F.g, shape, cap))
        return _reduced(np.minimum(a, b) if isinstance(F, Inter) else np.maximum(a, b), L)
    if isinstance(F, Geo):
        t = F.t
        cf = None if cap is None or t == 1 else cap / (1 - t)
        cg = None if cap is None or t == 0 else cap / t
        a, b, L = _common(jump_grid(F.f, shape, cf), jump_grid(F.g, shape, cg))
        p, q = t.numerator, t.denominator
        return _reduced((q - p) * a + p * b, q * L)
    if isinstance(F, Prod):
        a, b, L = _common(jump_grid(F.f, shape, cap), jump_grid(F.g, shape, cap))
        if cap is not None:
            ceiling = -(-cap.numerator * L // cap.denominator)
            a, b = np.minimum(a, ceiling), np.minimum(b, ceiling)
        return _reduced(_prod_levels(a, b), L)
    raise TypeError(f"not a filtration: {F!r}")


def jump(F: Filtration, beta: Sequence[int]) -> Fraction:
    """Largest lam with x^beta in a_lam."""
    beta = tuple(int(b) for b in beta)
    if len(beta) != F.dim:
        raise DimensionMismatch("exponent of wrong dimension")
    if isinstance(F, Val):
        return dot(F.alpha, beta)
    if isinstance(F, Scale):
        return jump(F.f, beta) / F.r
    if isinstance(F, Inter):
        return min(jump(F.f, beta), jump(F.g, beta))
    if isinstance(F, Sum):
        return max(jump(F.f, beta), jump(F.g, beta))
    if isinstance(F, Geo):
        return (1 - F.t) * jump(F.f, beta) + F.t * jump(F.g, beta)
    if isinstance(F, MulConst):
        vals = [jump(F.f, tuple(b - h for b, h in zip(beta, g))) for g in F.c.gens if all(h <= b for h, b in zip(g, beta))]
        return max(vals, default=Fraction(0))
    return jump_grid(F, tuple(b + 1 for b in beta)).at(beta)


# ---------------------------------------------------------------- evaluation


def axis_threshold(F: Filtration, axis: int, level, strict: bool = False) -> int:
    """Smallest k with jump(k e_axis) >= level (or > level when strict)."""
    level = frac(level)
    _require_primary(F)

    def ok(k):
        beta = tuple(k if i == axis else 0 for i in range(F.dim))
        j = jump(F, beta)
        return j > level if strict else j >= level

    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > 1 << 30:
            raise NotPrimary("jump along an axis does not grow")
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return 0 if ok(0) else hi


def member_box(F: Filtration, lam) -> tuple[int, ...]:
    """Extents of a box holding every minimal generator of a_lam."""
    return tuple(axis_threshold(F, i, lam) + 1 for i in range(F.dim))


def evaluate_via_jumps(F: Filtration, lam) -> MonomialIdeal:
    lam = frac(lam)
    if lam <= 0:
        return MonomialIdeal.unit(F.dim)
    grid = jump_grid(F, member_box(F, lam), cap=lam)
    return lat.ideal_from_mask(grid.geq(lam))


def _evaluate_val(F: Val, lam: Fraction) -> MonomialIdeal:
    n = F.dim
    den = reduce(math.lcm, (a.denominator for a in F.alpha), 1)
    w = [int(a * den) for a in F.alpha]
    p, q = lam.numerator, lam.denominator
    need = p * den  # require q * <w, beta> >= need
    if n == 1:
        return MonomialIdeal(1, ((-(-need // (q * w[0])),),))
    head = tuple(-(-need // (q * wi)) + 1 for wi in w[:-1])
    partial = _index_grid(head, w[:-1]) * q
    last = np.maximum(0, -((partial - need) // (q * w[-1])))
    return MonomialIdeal.from_generators(n, lat.staircase_from_profile(last))


@lru_cache(maxsize=4096)
def _evaluate(F: Filtration, lam: Fraction) -> MonomialIdeal:
    if lam <= 0:
        return MonomialIdeal.unit(F.dim)
    if isinstance(F, Val):
        return _evaluate_val(F, lam)
    if isinstance(F, Pow):
        return lat.power(F.base, math.ceil(lam))
    if isinstance(F, MulConst):
        return lat.product(F.c, _evaluate(F.f, lam))
    if isinstance(F, Scale):
        return _evaluate(F.f, F.r * lam)
    if isinstance(F, Prod):
        return lat.product(_evaluate(F.f, lam), _evaluate(F.g, lam))
    if isinstance(F, Inter):
        return lat.intersect(_evaluate(F.f, lam), _evaluate(F.g, lam))
    if isinstance(F, Sum):
        return lat.ideal_sum(_evaluate(F.f, lam), _evaluate(F.g, lam))
    if isinstance(F, Geo):
        return evaluate_via_jumps(F, lam)
    raise TypeError(f"not a filtration: {F!r}")


def evaluate(F: Filtration, lam) -> MonomialIdeal:
    """The ideal a_lam."""
    lam = frac(lam)
    if lam < 0:
        raise ValueError("index must be non-negative")
    return _evaluate(F, lam)


def jumping_numbers(F: Filtration, bound) -> list[Fraction]:
    """Positive jumping numbers up to ``bound``."""
    bound = frac(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    shape = tuple(axis_threshold(F, i, bound, strict=True) for i in range(F.dim))
    grid = jump_grid(F, shape)
    return [v for v in grid.values() if 0 < v <= bound]


def evaluate_geodesic_direct(F: Filtration, G: Filtration, t, lam) -> MonomialIdeal:
    """Sum over lam = (1-t) mu + t nu of F_mu intersect G_nu (mu, nu >= 0)."""
    t, lam = frac(t), frac(lam)
    if not 0 < t < 1 or lam <= 0:
        raise ValueError("need 0 < t < 1 and lam > 0")
    top = lam / (1 - t)
    mus = {Fraction(0), top} | set(jumping_numbers(F, top))
    out = MonomialIdeal.zero(F.dim)
    for mu in sorted(mus):
        nu = (lam - (1 - t) * mu) / t
        out = lat.ideal_sum(out, lat.intersect(evaluate(F, mu), evaluate(G, nu)))
    return out


# ---------------------------------------------------------------- asymptotics


@lru_cache(maxsize=1024)
def limit_body(F: Filtration) -> ph.UpBody | ph.BodyUnion:
    """The limit region {gauge >= 1}; a BodyUnion when an ideal sum makes it non-convex."""
    if isinstance(F, Val):
        return ph.UpBody.halfspace(F.alpha, 1)
    if isinstance(F, Pow):
        return lat.newton_polyhedron(F.base)
    if isinstance(F, MulConst):
        return limit_body(F.f)
    if isinstance(F, Scale):
        return ph.union_of(ph.scale_body(p, F.r) for p in ph.region_parts(limit_body(F.f)))
    if isinstance(F, Geo):
        P = ph.require_convex(limit_body(F.f))
        Q = ph.require_convex(limit_body(F.g))
        return ph.affine_combination_body(ph.gauge_of(P), ph.gauge_of(Q), F.t)
    parts_f = ph.region_parts(limit_body(F.f))
    parts_g = ph.region_parts(limit_body(F.g))
    if isinstance(F, Sum):
        return ph.union_of(parts_f + parts_g)
    op = ph.minkowski_sum if isinstance(F, Prod) else ph.intersect_bodies
    return ph.union_of(op(p, q) for p in parts_f for q in parts_g)


def convex_limit_body(F: Filtration) -> ph.UpBody:
    return ph.require_convex(limit_body(F))


def limit_gauge(F: Filtration) -> ph.GaugeFunction:
    return ph.gauge_of(convex_limit_body(F))


def region_gauge_value(R: ph.UpBody | ph.BodyUnion, x) -> Fraction:
    """max over the parts of the part gauges (the gauge of a union)."""
    return max(ph.gauge_of(p)(x) for p in ph.region_parts(R))


def saturate(F: Filtration, lam) -> MonomialIdeal:
    """Lattice points of lam times the limit body."""
    lam = frac(lam)
    if lam <= 0:
        raise ValueError("index must be positive")
    R = limit_body(F)
    if isinstance(R, ph.BodyUnion):
        warnings.warn("saturation of an ideal sum uses the convex hull of the union", SumNotConvexWarning, stacklevel=2)
        R = R.hull()
    body = ph.scale_body(R, lam)
    box = tuple(math.ceil(c) for c in body.axis_intercepts())
    return lat.ideal_from_predicate(F.dim, box, body.contains_point)


def val_of_filtration(alpha: Sequence, F: Filtration) -> Fraction:
    """v_alpha(a_.) as the minimum of <alpha, .> over the limit region."""
    return min(ph.support_min(p, alpha) for p in ph.region_parts(limit_body(F)))


def val_sequence(alpha: Sequence, F: Filtration, ms: Sequence[int]) -> list[Fraction]:
    """v_alpha(a_m)/m for each m (decreases towards val_of_filtration)."""
    alpha = tuple(frac(a) for a in alpha)
    return [min(dot(alpha, g) for g in evaluate(F, m).gens) / m for m in ms]


def is_linearly_bounded(F: Filtration) -> tuple[bool, Fraction | None]:
    """Bounded complement of the limit region, with the slope c of a_lam in m^{ceil(c lam)}."""
    parts = ph.region_parts(limit_body(F))
    if not all(p.has_bounded_complement() for p in parts):
        return False, None
    ones = (1,) * F.dim
    return True, min(ph.support_min(p, ones) for p in parts)


def proportionality(F: Filtration, G: Filtration) -> Fraction | None:
    """c with limit_body(G) = c * limit_body(F), if any."""
    return ph.proportionality_constant(convex_limit_body(G), convex_limit_body(F))


def proportionality_by_support(P: ph.UpBody, Q: ph.UpBody) -> Fraction | None:
    """c with Q = c * P, decided by support values on all facet normals of both bodies."""
    normals = {a for a, _ in P.facets} | {a for a, _ in Q.facets}
    if not normals:
        return Fraction(1)
    ratios = set()
    for a in normals:
        sp = min(dot(a, v) for v in P.vertices)
        sq = min(dot(a, v) for v in Q.vertices)
        if sq == 0 or sp == 0:
            if sp != sq:
                return None
            continue
        ratios.add(sq / sp)
    if len(ratios) > 1:
        return None
    return ratios.pop() if ratios else Fraction(1)


# ---------------------------------------------------------------- Rees closure


def _tangent_membership(A: ph.UpBody, c: MonomialIdeal, beta) -> bool:
    """Is beta in A + s*NP(c) for some s > 0?  Decided on the tangent cone at beta."""
    if not A.contains_point(beta):
        return False
    allowed = {i for i in range(A.dim) if beta[i] > 0}
    for a, b in A.facets:
        if dot(a, beta) == b:
            allowed -= {i for i in range(A.dim) if a[i] > 0}
    return any(all(g[i] == 0 for i in range(A.dim) if i not in allowed) for g in c.gens)


def rees_closure(F: Filtration, m: int, r_max: int = 10) -> tuple[MonomialIdeal, str]:
    """{beta : r beta in NP(a_{rm}) for some r}, with a flag saying whether the search over r was exact."""
    if m < 1 or r_max < 1:
        raise ValueError("m and r_max must be positive")
    if isinstance(F, Val):
        return evaluate(F, m), "exact"
    if isinstance(F, Pow):
        return lat.integral_closure(lat.power(F.base, m)), "exact"
    if isinstance(F, MulConst) and isinstance(F.f, Pow):
        A = lat.newton_polyhedron(lat.power(F.f.base, m))
        box = tuple(m * p + 1 for p in F.f.base.pure_powers())
        return lat.ideal_from_predicate(F.dim, box, lambda beta: _tangent_membership(A, F.c, beta)), "exact"
    _require_primary(F)
    bodies = [(r, lat.newton_polyhedron(evaluate(F, r * m))) for r in range(1, r_max + 1)]
    box = tuple(p for p in evaluate(F, m).pure_powers())

    def inside(beta):
        return any(P.contains_point(tuple(r * b for b in beta)) for r, P in bodies)

    return lat.ideal_from_predicate(F.dim, box, inside), "bounded-search"


# ---------------------------------------------------------------- defect bounds


def _lipschitz(P: ph.UpBody) -> Fraction:
    """Bound on |g(x) - g(y)| / |x - y|_1 for the gauge g of P."""
    return max((Fraction(max(a)) / b for a, b in P.facets), default=Fraction(0))


def jump_defect(F: Filtration) -> Fraction:
    """A constant delta with gauge(beta) - delta <= jump(beta) <= gauge(beta) + delta on N^n.

    Valuations have no defect; powers lose at most n by the monomial
    Briançon-Skoda containment; the other nodes propagate bounds.
    """
    n = F.dim
    if isinstance(F, Val):
        return Fraction(0)
    if isinstance(F, Pow):
        return Fraction(n)
    if isinstance(F, Scale):
        return jump_defect(F.f) / F.r
    if isinstance(F, (Inter, Sum)):
        return max(jump_defect(F.f), jump_defect(F.g))
    if isinstance(F, Geo):
        return (1 - F.t) * jump_defect(F.f) + F.t * jump_defect(F.g)
    if isinstance(F, Prod):
        lf = _lipschitz(convex_limit_body(F.f))
        lg = _lipschitz(convex_limit_body(F.g))
        return max(jump_defect(F.f), jump_defect(F.g)) + n * min(lf, lg)
    if isinstance(F, MulConst):
        if not lat.is_m_primary(F.c):
            raise NotPrimary("defect is unbounded for a non-primary multiplier")
        inner = jump_defect(F.f)
        P = convex_limit_body(F.f)
        L = _lipschitz(P)
        shift = max(L * sum(g) for g in F.c.gens) + inner
        # outside the staircase of c the jump is 0, so the gauge itself is the defect
        g = ph.gauge_of(P)
        outside = [beta for beta in np.ndindex(*[p for p in F.c.pure_powers()]) if not lat.member(F.c, beta)]
        return max([shift] + [g(beta) for beta in outside])
    raise TypeError(f"not a filtration: {F!r}")
