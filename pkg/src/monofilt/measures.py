"""Measures attached to the geodesic between two filtrations.

The limit measure mu is kept as pushforward data: n! times Lebesgue measure on
the orthant, pushed along x -> (g0(x), g1(x)) where g0, g1 are the limit
gauges.  Every query is a region query answered by exact polyhedral volumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import filtration as fl
from . import lattice as lat
from . import polyhedra as ph
from .errors import NonConvergence
from .filtration import Filtration, Inter, Scale
from .multiplicity import geodesic_E, region_multiplicity
from .rational import dot, frac

DEFAULT_SEED = 20240917


@dataclass
class DiscreteMeasure2D:
    atoms: dict[tuple[Fraction, Fraction], Fraction]

    @property
    def total(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    def mass(self, predicate) -> Fraction:
        return sum((w for p, w in self.atoms.items() if predicate(*p)), Fraction(0))

    def halfplane(self, t, a=1) -> Fraction:
        """Mass of {(1-t) x + t y < a}."""
        t, a = frac(t), frac(a)
        return self.mass(lambda x, y: (1 - t) * x + t * y < a)

    def rows(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        return [(x, y, w) for (x, y), w in sorted(self.atoms.items())]


def mu_m(F: Filtration, G: Filtration, m: int, cutoff=1) -> DiscreteMeasure2D:
    """Atoms (jump_F/m, jump_G/m) of mass n!/m^n over all beta with min jump <= cutoff*m.

    Every atom of the halfplane {(1-t)x + ty < a} with a <= cutoff is present.
    """
    if m < 1:
        raise ValueError("m must be positive")
    n = F.dim
    level = frac(cutoff) * m
    shape = tuple(
        max(fl.axis_threshold(F, i, level, strict=True), fl.axis_threshold(G, i, level, strict=True)) for i in range(n)
    )
    a, b = fl.jump_grid(F, shape), fl.jump_grid(G, shape)
    keep = np.minimum(a.num * b.den, b.num * a.den) * level.denominator <= level.numerator * a.den * b.den
    mass = Fraction(math.factorial(n), m**n)
    counts: dict[tuple[int, int], int] = {}
    for x, y in zip(a.num[keep].ravel().tolist(), b.num[keep].ravel().tolist()):
        counts[(x, y)] = counts.get((x, y), 0) + 1
    atoms = {(Fraction(x, a.den * m), Fraction(y, b.den * m)): c * mass for (x, y), c in counts.items()}
    return DiscreteMeasure2D(atoms)


def halfplane_identity(F: Filtration, G: Filtration, t, m: int) -> Fraction:
    """n! * colength(a_{m,t}) / m^n, the value mu_m must give the halfplane {(1-t)x + ty < 1}."""
    geo = fl.Geo(F, G, frac(t))
    return Fraction(math.factorial(F.dim) * lat.colength(fl.evaluate(geo, m)), m**F.dim)


class GeodesicMeasure:
    """The limit measure mu of the pair (F, G) and its segment measure."""

    def __init__(self, F: Filtration, G: Filtration):
        if F.dim != G.dim:
            raise ValueError("filtrations of different dimension")
        self.F, self.G = F, G
        self.n = F.dim
        self.P0 = fl.convex_limit_body(F)
        self.P1 = fl.convex_limit_body(G)
        self.g0 = ph.gauge_of(self.P0)
        self.g1 = ph.gauge_of(self.P1)
        self.forms0 = self.g0.linear_forms()
        self.forms1 = self.g1.linear_forms()

    # -- the function H and region queries

    def H(self, x, y) -> Fraction:
        """n! * covolume of xP0 intersect yP1, with the a_{<=0} = R convention."""
        x, y = frac(x), frac(y)
        nf = math.factorial(self.n)
        if x <= 0 and y <= 0:
            return Fraction(0)
        if x <= 0:
            return y**self.n * nf * ph.covolume(self.P1)
        if y <= 0:
            return x**self.n * nf * ph.covolume(self.P0)
        body = ph.intersect_bodies(ph.scale_body(self.P0, x), ph.scale_body(self.P1, y))
        return nf * ph.covolume(body)

    def box(self, x1, x2, y1, y2) -> Fraction:
        """mu of the box [x1, x2) x [y1, y2) as a mixed difference of H."""
        x1, x2, y1, y2 = map(frac, (x1, x2, y1, y2))
        if not (x1 < x2 and y1 < y2) or x1 < 0 or y1 < 0:
            raise ValueError("need 0 <= x1 < x2 and 0 <= y1 < y2")
        return self.H(x1, y2) + self.H(x2, y1) - self.H(x1, y1) - self.H(x2, y2)

    def halfplane(self, t, a=1) -> Fraction:
        """mu({(1-t) x + t y < a}) = a^n E(t)."""
        t, a = frac(t), frac(a)
        if a < 0:
            raise ValueError("a must be non-negative")
        return a**self.n * geodesic_E(self.F, self.G, t)

    # -- the segment measure

    def _cell_rows(self, j: int, k: int) -> list[tuple[tuple, Fraction]]:
        n = self.n
        lj, mk = self.forms0[j], self.forms1[k]
        rows = [(tuple(-Fraction(i == r) for i in range(n)), Fraction(0)) for r in range(n)]
        rows += [(tuple(a - b for a, b in zip(lj, other)), Fraction(0)) for i, other in enumerate(self.forms0) if i != j]
        rows += [(tuple(a - b for a, b in zip(mk, other)), Fraction(0)) for i, other in enumerate(self.forms1) if i != k]
        return rows

    def _cells(self):
        return [(j, k) for j in range(len(self.forms0)) for k in range(len(self.forms1))]

    def tilde_cdf(self, s) -> Fraction:
        """Exact mu~([0, s]) = n! vol{g0 <= s (g0 + g1), g0 + g1 < 1}."""
        s = frac(s)
        if not 0 <= s <= 1:
            raise ValueError("s must lie in [0, 1]")
        total = Fraction(0)
        for j, k in self._cells():
            lj, mk = self.forms0[j], self.forms1[k]
            rows = self._cell_rows(j, k)
            rows.append((tuple((1 - s) * a - s * b for a, b in zip(lj, mk)), Fraction(0)))
            rows.append((tuple(a + b for a, b in zip(lj, mk)), Fraction(1)))
            total += ph.hpoly_volume(self.n, rows)
        return math.factorial(self.n) * total

    @cached_property
    def slice_values(self) -> list[Fraction]:
        """z = g0/(g0+g1) at the vertices of every cell slice {l_j + m_k = 1}; the cdf breakpoints."""
        zs = set()
        for j, k in self._cells():
            lj, mk = self.forms0[j], self.forms1[k]
            rows = self._cell_rows(j, k)
            s = tuple(a + b for a, b in zip(lj, mk))
            rows.append((s, Fraction(1)))
            rows.append((tuple(-c for c in s), Fraction(-1)))
            for v in ph.polytope_vertices(self.n, rows):
                zs.add(dot(lj, v))
        return sorted(zs)

    def support(self) -> tuple[Fraction, Fraction]:
        zs = self.slice_values
        return zs[0], zs[-1]

    def is_point_supported(self) -> bool:
        lo, hi = self.support()
        return lo == hi

    def tilde_cdf_montecarlo(self, s, samples: int = 200_000, seed: int = DEFAULT_SEED) -> tuple[float, float]:
        """Sampled mu~([0, s]) with its standard error."""
        s = float(frac(s))
        return self._sample(lambda z: (z <= s).astype(float), samples, seed)

    def _sample(self, weight, samples: int, seed: int) -> tuple[float, float]:
        n = self.n
        # {g0 + g1 < 1} sits inside {g0 < 1}, whose extent on axis i is 1/g0(e_i)
        sides = np.array([1.0 / float(self.g0(tuple(int(i == r) for i in range(n)))) for r in range(n)])
        rng = np.random.default_rng(seed)
        x = rng.random((samples, n)) * sides
        A0 = np.array([[float(c) for c in f] for f in self.forms0])
        A1 = np.array([[float(c) for c in f] for f in self.forms1])
        h0 = (x @ A0.T).min(axis=1)
        h1 = (x @ A1.T).min(axis=1)
        inside = (h0 + h1) < 1
        z = np.where(inside, h0 / np.where(inside, h0 + h1, 1.0), 0.0)
        vals = np.where(inside, weight(z), 0.0)
        scale = math.factorial(n) * float(np.prod(sides))
        return scale * float(vals.mean()), scale * float(vals.std(ddof=1)) / math.sqrt(samples)

    # -- the integral representation of E(t)

    def E_via_segment(self, t, nodes: int = 40, tol: float = 1e-9) -> tuple[float, float]:
        """Integral of ((1-t) z + t (1-z))^(-n) against mu~, with an error estimate.

        The cdf is a polynomial of degree < n between consecutive breakpoints,
        so it is recovered exactly from n interior values per interval; the
        smooth part is integrated by Gauss-Legendre and atoms are added at the
        breakpoints.
        """
        t = frac(t)
        n = self.n
        phi = lambda z: (float(t) + (1 - 2 * float(t)) * z) ** (-n)  # noqa: E731
        breaks = sorted(set(self.slice_values) | {Fraction(0), Fraction(1)})
        fine = coarse = 0.0
        left_limit = Fraction(0)
        for b0, b1 in zip(breaks, breaks[1:]):
            at = self.tilde_cdf(b0)
            jump = at - left_limit
            if jump:
                fine += float(jump) * phi(float(b0))
                coarse += float(jump) * phi(float(b0))
            xs = [b0 + (b1 - b0) * Fraction(i + 1, n + 1) for i in range(n)]
            poly = _interpolate(xs, [self.tilde_cdf(x) for x in xs])
            deriv = np.polynomial.polynomial.polyder([float(c) for c in poly])
            fine += _gauss(lambda z: phi(z) * np.polynomial.polynomial.polyval(z, deriv), float(b0), float(b1), nodes)
            coarse += _gauss(lambda z: phi(z) * np.polynomial.polynomial.polyval(z, deriv), float(b0), float(b1), nodes // 2)
            left_limit = sum((c * b1**i for i, c in enumerate(poly)), Fraction(0))
        last = self.tilde_cdf(breaks[-1]) - left_limit
        if last:
            fine += float(last) * phi(float(breaks[-1]))
            coarse += float(last) * phi(float(breaks[-1]))
        err = abs(fine - coarse)
        if err > tol * max(1.0, abs(fine)):
            raise NonConvergence(f"quadrature did not settle (difference {err:.3g})")
        return fine, err

    def E_via_segment_montecarlo(self, t, samples: int = 200_000, seed: int = DEFAULT_SEED) -> tuple[float, float]:
        tf = float(frac(t))
        return self._sample(lambda z: (tf + (1 - 2 * tf) * z) ** (-self.n), samples, seed)


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Exact coefficients (low degree first) of the polynomial through the points."""
    k = len(xs)
    coeffs = [Fraction(0)] * k
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= xj * basis[d + 1]
            denom *= xi - xj
        for d, c in enumerate(basis):
            coeffs[d] += yi * c / denom
    return coeffs


def _gauss(f, a: float, b: float, nodes: int) -> float:
    x, w = np.polynomial.legendre.leggauss(nodes)
    mid, half = (a + b) / 2, (b - a) / 2
    return half * float(sum(wi * f(mid + half * xi) for xi, wi in zip(x, w)))


# ---------------------------------------------------------------- comparability


def gauge_ratio_bound(F: Filtration, G: Filtration) -> Fraction:
    """max of g0/g1 and g1/g0 over the orthant (attained on rays of the common fan)."""
    mu = GeodesicMeasure(F, G)
    lo, hi = mu.support()
    return max((1 - lo) / lo, hi / (1 - hi))


def comparability_constants(F: Filtration, G: Filtration) -> tuple[Fraction, Fraction]:
    """C and D with m^ceil(C lam) inside F_lam and G_lam, F_{D lam} inside G_lam and vice versa, lam >= 1.

    Both come from the limit gauges corrected by certified jump defects.
    """
    n = F.dim
    dF, dG = fl.jump_defect(F), fl.jump_defect(G)
    axes = [tuple(int(i == r) for i in range(n)) for r in range(n)]
    C = Fraction(0)
    for H, d in ((F, dF), (G, dG)):
        g = fl.limit_gauge(H)
        C = max(C, (1 + d) / min(g(e) for e in axes))
    if F == G:
        return C, Fraction(1)
    Dg = gauge_ratio_bound(F, G)
    D = max(Dg * (1 + dF) + dG, Dg * (1 + dG) + dF)
    return C, D


def in_support_band(x: Fraction, y: Fraction, m: int, D: Fraction) -> bool:
    """The support condition for atoms of mu_m."""
    return x <= Fraction(1, m) or y <= Fraction(1, m) or (x <= D * y and y <= D * x)


def point_support_by_multiplicity(F: Filtration, G: Filtration) -> tuple[bool, Fraction]:
    """Single-atom test through e(F) = e(F cap G_c.) = e(G_c.) with c = g1/g0 on the diagonal."""
    ones = (1,) * F.dim
    c = fl.limit_gauge(G)(ones) / fl.limit_gauge(F)(ones)
    Gc = Scale(c, G)
    e = [region_multiplicity(fl.limit_body(H)) for H in (F, Inter(F, Gc), Gc)]
    return e[0] == e[1] == e[2], c
