"""Semigroup truncations and Okounkov-body estimates for geodesic multiplicities.

On monomials the good valuation is the identity on exponents ordered by a
weight and a generic tiebreak weight, so the value semigroup is N^n and
m-functions are plain jump functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.spatial import ConvexHull

from . import filtration as fl
from . import polyhedra as ph
from .filtration import Filtration, Geo
from .lattice import colength
from .multiplicity import geodesic_E
from .rational import dot, frac


@dataclass(frozen=True)
class GoodValuation:
    alpha: tuple[Fraction, ...]
    tiebreak: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(frac(a) for a in self.alpha))
        object.__setattr__(self, "tiebreak", tuple(frac(a) for a in self.tiebreak))
        if len(self.alpha) != len(self.tiebreak):
            raise ValueError("weights of different length")
        if any(a <= 0 for a in self.alpha + self.tiebreak):
            raise ValueError("weights must be strictly positive")

    @property
    def dim(self) -> int:
        return len(self.alpha)

    def xi(self, beta) -> Fraction:
        return dot(self.alpha, beta)

    def key(self, beta) -> tuple[Fraction, Fraction]:
        return dot(self.alpha, beta), dot(self.tiebreak, beta)

    def has_simple_leaves(self, box: Sequence[int]) -> bool:
        """Distinct exponents in the box get distinct keys."""
        keys = [self.key(b) for b in cartesian(*(range(s + 1) for s in box))]
        return len(set(keys)) == len(keys)

    @classmethod
    def generic(cls, alpha: Sequence, box: Sequence[int], seed: int = 0, tries: int = 100) -> GoodValuation:
        rng = np.random.default_rng(seed)
        for _ in range(tries):
            tiebreak = tuple(Fraction(int(rng.integers(1, 10**6)), 10**6) for _ in alpha)
            v = cls(tuple(alpha), tiebreak)
            if v.has_simple_leaves(box):
                return v
        raise RuntimeError("could not find a generic tiebreak weight")


def m_function(F: Filtration, beta) -> Fraction:
    return fl.jump(F, beta)


def h_approx(F: Filtration, beta: Sequence, ks: Sequence[int]) -> list[Fraction]:
    """m(floor(k beta))/k along the schedule; tends to the limit gauge at beta."""
    beta = tuple(frac(b) for b in beta)
    if any(b <= 0 for b in beta):
        raise ValueError("beta must lie in the open orthant")
    return [fl.jump(F, tuple(math.floor(k * b) for b in beta)) / k for k in ks]


def geodesic_jump_by_membership(F: Filtration, G: Filtration, t, beta, eps=Fraction(1, 10**6)) -> bool:
    """Check (1-t) jump_F + t jump_G against membership in the sum-of-intersections ideals."""
    t = frac(t)
    lam = (1 - t) * fl.jump(F, beta) + t * fl.jump(G, beta)
    if lam == 0:
        return beta not in fl.evaluate_geodesic_direct(F, G, t, eps)
    return beta in fl.evaluate_geodesic_direct(F, G, t, lam) and beta not in fl.evaluate_geodesic_direct(F, G, t, lam + eps)


def graded_piece_count(F: Filtration, lam) -> tuple[int, int]:
    """(#{beta : jump = lam}, colength(a_{>lam}) - colength(a_lam)) for a jumping number lam."""
    lam = frac(lam)
    nxt = min(v for v in fl.jumping_numbers(F, lam + 1 + lam) if v > lam)
    shape = tuple(fl.axis_threshold(F, i, lam, strict=True) for i in range(F.dim))
    grid = fl.jump_grid(F, shape)
    count = int(np.count_nonzero(grid.num * lam.denominator == lam.numerator * grid.den))
    return count, colength(fl.evaluate(F, nxt)) - colength(fl.evaluate(F, lam))


# ---------------------------------------------------------------- truncations


def _degree_bound(F: Filtration, G: Filtration) -> int:
    """Smallest d with m^d inside a_1 of both filtrations."""
    n = F.dim
    d = 1
    while True:
        shape = (d + 1,) * n
        a, b = fl.jump_grid(F, shape), fl.jump_grid(G, shape)
        deg = sum(np.indices(shape))
        on = deg == d
        if np.all(a.num[on] >= a.den) and np.all(b.num[on] >= b.den):
            return d
        d += 1


def izumi_constant(F: Filtration, G: Filtration, alpha: Sequence) -> Fraction:
    """M = 2 M' with M' = 2 d / r, where |beta| >= r <alpha, beta>."""
    alpha = tuple(frac(a) for a in alpha)
    r = 1 / max(alpha)
    return 2 * (2 * _degree_bound(F, G) / r)


@dataclass
class Truncation:
    m: int
    M: Fraction
    count_outside: int  # #(Gamma_m minus Gamma_m^(t))
    colength: int
    vol_delta: Fraction
    vol_delta_t: Fraction
    n: int

    @property
    def identity_ok(self) -> bool:
        return self.count_outside == self.colength

    @property
    def estimate(self) -> Fraction:
        return math.factorial(self.n) * (self.vol_delta - self.vol_delta_t)


def _hull_volume(points: np.ndarray) -> Fraction:
    """Exact volume of the convex hull of integer points."""
    n = points.shape[1]
    if len(points) <= n:
        return Fraction(0)
    if n == 2:
        pts = [tuple(Fraction(int(c)) for c in p) for p in points]
        return ph.polygon_area(pts)
    hull = ConvexHull(points.astype(float))
    pts = [tuple(int(c) for c in p) for p in points]
    base = pts[hull.vertices[0]]
    total = Fraction(0)
    for simplex in hull.simplices:
        rows = [tuple(a - b for a, b in zip(pts[i], base)) for i in simplex]
        total += abs(Fraction(ph._det(rows))) / math.factorial(n)
    return total


def _column_extremes(mask: np.ndarray) -> np.ndarray:
    """Lowest and highest True cell along the last axis of every column."""
    has = mask.any(axis=-1)
    lo = mask.argmax(axis=-1)
    hi = mask.shape[-1] - 1 - mask[..., ::-1].argmax(axis=-1)
    heads = np.argwhere(has)
    pts = [np.append(h, lo[tuple(h)]) for h in heads] + [np.append(h, hi[tuple(h)]) for h in heads]
    return np.array(pts, dtype=np.int64).reshape(-1, mask.ndim)


def truncation(F: Filtration, G: Filtration, t, m: int, alpha: Sequence | None = None) -> Truncation:
    """Gamma_m, Gamma_m^(t) and their scaled hulls at level m."""
    t = frac(t)
    if m < 1:
        raise ValueError("m must be positive")
    n = F.dim
    alpha = tuple(frac(a) for a in (alpha or (1,) * n))
    M = izumi_constant(F, G, alpha)
    top = M * m
    shape = tuple(math.floor(top / a) + 1 for a in alpha)
    den = math.lcm(*(a.denominator for a in alpha), top.denominator)
    xi = sum(np.indices(shape)[i] * int(alpha[i] * den) for i in range(n))
    gamma = xi <= int(top * den)
    grid = fl.jump_grid(Geo(F, G, t), shape, cap=m)
    member = gamma & (grid.num >= m * grid.den)
    outside = int(np.count_nonzero(gamma & ~member))
    return Truncation(
        m,
        M,
        outside,
        colength(fl.evaluate(Geo(F, G, t), m)),
        _hull_volume(_column_extremes(gamma)) / Fraction(m) ** n,
        _hull_volume(_column_extremes(member)) / Fraction(m) ** n,
        n,
    )


def okounkov_mult_estimate(F: Filtration, G: Filtration, t, m: int, alpha: Sequence | None = None) -> Fraction:
    return truncation(F, G, t, m, alpha).estimate


def limit_truncation_estimate(F: Filtration, G: Filtration, t, M) -> Fraction:
    """n!(vol Delta - vol Delta^(t)) for the limit bodies Delta = {sum x <= M}, Delta^(t) = Delta cap P_t."""
    t, M = frac(t), frac(M)
    n = F.dim
    body = fl.limit_body(Geo(F, G, t))
    if any(sum(v) > M for v in body.vertices):
        raise ValueError("truncation too small to contain the complement")
    rows = [(tuple(-Fraction(i == r) for i in range(n)), 0) for r in range(n)]
    rows.append(((1,) * n, M))
    simplex = ph.hpoly_volume(n, rows)
    rows += [(tuple(-c for c in a), -b) for a, b in body.facets]
    return math.factorial(n) * (simplex - ph.hpoly_volume(n, rows))


# ---------------------------------------------------------------- e^{-h} integral


@dataclass
class ExpIntegral:
    value: float
    error: float
    exact: Fraction | None = None


def _crossings(forms: list[tuple[Fraction, ...]]) -> list[Fraction]:
    """Parameters s in [0, 1] where two forms agree along (1-s, s)."""
    pts = {Fraction(0), Fraction(1)}
    for f, g in ((f, g) for i, f in enumerate(forms) for g in forms[i + 1 :]):
        a0, a1 = f[0] - g[0], f[1] - g[1]  # difference at s: a0 (1-s) + a1 s
        if a0 != a1:
            s = a0 / (a0 - a1)
            if 0 < s < 1:
                pts.add(s)
    return sorted(pts)


def exp_integral(g: ph.GaugeFunction) -> ExpIntegral:
    """Integral of e^(-g) over the orthant, i.e. (n-1)! times the integral of g^(-n) over the standard simplex."""
    n = g.dim
    forms = g.linear_forms()
    if not forms:
        raise ValueError("gauge of the whole orthant")
    axes = [tuple(int(i == r) for i in range(n)) for r in range(n)]
    if any(g(e) <= 0 for e in axes):
        raise ValueError("gauge must be positive off the origin")
    if n == 1:
        val = 1 / g(axes[0])
        return ExpIntegral(float(val), 0.0, val)
    if n == 2:
        total = Fraction(0)
        cuts = _crossings(forms)
        for s0, s1 in zip(cuts, cuts[1:]):
            mid = (s0 + s1) / 2
            f = min(forms, key=lambda f: f[0] * (1 - mid) + f[1] * mid)
            v0 = f[0] * (1 - s0) + f[1] * s0
            v1 = f[0] * (1 - s1) + f[1] * s1
            total += (s1 - s0) / (v0 * v1)
        return ExpIntegral(float(total), 0.0, total)
    A = np.array([[float(c) for c in f] for f in forms])

    def integrand(*s):
        w = np.array(list(s) + [1 - sum(s)])
        return float((A @ w).min()) ** (-n)

    ranges = [lambda *outer: (0.0, 1.0 - sum(outer)) for _ in range(n - 1)]
    # nquad hands each range callable the outer variables
    val, err = integrate.nquad(integrand, ranges, opts={"epsabs": 1e-11, "epsrel": 1e-10, "limit": 200})
    scale = math.factorial(n - 1)
    return ExpIntegral(scale * val, scale * err)


# ---------------------------------------------------------------- E'' E >= (n+1)/n E'^2


@dataclass
class CauchySchwarzRow:
    t: Fraction
    E: float
    dE: float
    d2E: float
    lhs: float  # E'' E
    rhs: float  # (n+1)/n E'^2
    holds: bool
    equality: bool


def cauchy_schwarz_check(F: Filtration, G: Filtration, ts: Sequence, step=Fraction(1, 1000), slack: float = 1e-6) -> list[CauchySchwarzRow]:
    """Five-point central differences of the exact E; the differences themselves are exact rationals."""
    h = frac(step)
    if not 0 < h <= Fraction(1, 20):
        raise ValueError("step must lie in (0, 1/20]")
    n = F.dim
    out = []
    for t in map(frac, ts):
        if t - 2 * h < 0 or t + 2 * h > 1:
            raise ValueError("grid point too close to the ends for this step")
        e = {k: geodesic_E(F, G, t + k * h) for k in (-2, -1, 0, 1, 2)}
        d1 = (-e[2] + 8 * e[1] - 8 * e[-1] + e[-2]) / (12 * h)
        d2 = (-e[2] + 16 * e[1] - 30 * e[0] + 16 * e[-1] - e[-2]) / (12 * h * h)
        lhs = d2 * e[0]
        rhs = Fraction(n + 1, n) * d1 * d1
        tol = slack * max(1.0, abs(float(rhs)))
        diff = float(lhs - rhs)
        out.append(CauchySchwarzRow(t, float(e[0]), float(d1), float(d2), float(lhs), float(rhs), diff >= -tol, abs(diff) <= tol))
    return out
