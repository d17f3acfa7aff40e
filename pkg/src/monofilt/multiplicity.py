"""Hilbert-Samuel multiplicities of monomial ideals and filtrations, and the deciders built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import filtration as fl
from . import lattice as lat
from . import polyhedra as ph
from .errors import NotPrimary
from .filtration import Filtration, Inter
from .lattice import MonomialIdeal
from .rational import frac, sign_of_radical_sum


def mult_ideal(I: MonomialIdeal) -> Fraction:
    """e(I) = n! * covolume of the Newton polyhedron."""
    if not lat.is_m_primary(I):
        raise NotPrimary(f"{I} is not primary to the maximal ideal")
    if I.is_unit:
        return Fraction(0)
    return math.factorial(I.dim) * ph.covolume(lat.newton_polyhedron(I))


def default_schedule(n: int) -> tuple[int, ...]:
    top = {1: 8, 2: 8, 3: 5}.get(n, 3)
    return tuple(2**k for k in range(top + 1))


@dataclass
class MultResult:
    exact: Fraction
    n: int
    estimates: list[tuple[int, Fraction]] = field(default_factory=list)

    def running_infimum(self) -> list[Fraction]:
        out, best = [], None
        for _, v in self.estimates:
            best = v if best is None else min(best, v)
            out.append(best)
        return out


def region_multiplicity(R) -> Fraction:
    return math.factorial(R.dim) * ph.region_covolume(R)


def mult_filtration(F: Filtration, schedule: Sequence[int] | None = None) -> MultResult:
    """Exact e(F) from the limit region, with e(a_m)/m^n estimates along a schedule."""
    n = F.dim
    exact = region_multiplicity(fl.limit_body(F))
    schedule = default_schedule(n) if schedule is None else schedule
    est = [(m, mult_ideal(fl.evaluate(F, m)) / Fraction(m) ** n) for m in schedule]
    return MultResult(exact, n, est)


def colength_estimate(F: Filtration, m: int) -> Fraction:
    """n! * colength(a_m) / m^n."""
    if m < 1:
        raise ValueError("m must be positive")
    n = F.dim
    return Fraction(math.factorial(n) * lat.colength(fl.evaluate(F, m)), m**n)


def geodesic_E(F: Filtration, G: Filtration, t) -> Fraction:
    """E(t): multiplicity of the geodesic between F and G."""
    t = frac(t)
    P = fl.convex_limit_body(F)
    Q = fl.convex_limit_body(G)
    body = ph.affine_combination_body(ph.gauge_of(P), ph.gauge_of(Q), t)
    return math.factorial(F.dim) * ph.covolume(body)


# ---------------------------------------------------------------- Minkowski


@dataclass
class MinkowskiReport:
    e_prod: Fraction
    e_f: Fraction
    e_g: Fraction
    n: int
    sign: int  # sign of e_prod^(1/n) - e_f^(1/n) - e_g^(1/n)
    equality: bool
    proportionality: Fraction | None  # c with P_G = c * P_F

    @property
    def holds(self) -> bool:
        return self.sign <= 0

    @property
    def consistent(self) -> bool:
        return self.equality == (self.proportionality is not None)


def minkowski_check(F: Filtration, G: Filtration) -> MinkowskiReport:
    n = F.dim
    P, Q = fl.convex_limit_body(F), fl.convex_limit_body(G)
    e_f = math.factorial(n) * ph.covolume(P)
    e_g = math.factorial(n) * ph.covolume(Q)
    e_fg = math.factorial(n) * ph.covolume(ph.minkowski_sum(P, Q))
    sign = sign_of_radical_sum([(1, e_fg), (-1, e_f), (-1, e_g)], n)
    return MinkowskiReport(e_fg, e_f, e_g, n, sign, sign == 0, ph.proportionality_constant(Q, P))


# ---------------------------------------------------------------- Rees / equivalence


def default_box(n: int) -> tuple[int, ...]:
    return (13,) * 2 if n == 2 else (7,) * n if n == 3 else (30,) * n if n == 1 else (4,) * n


def jump_dominated(F: Filtration, G: Filtration, box: Sequence[int] | None = None) -> bool:
    """jump_F <= jump_G on every exponent of the box."""
    box = default_box(F.dim) if box is None else tuple(box)
    a = fl.jump_grid(F, box)
    b = fl.jump_grid(G, box)
    return bool(np.all(a.num * b.den <= b.num * a.den))


@dataclass
class ReesReport:
    contained: bool
    e_f: Fraction
    e_g: Fraction
    equal_mult: bool
    equal_saturation: bool

    @property
    def not_nested(self) -> bool:
        return not self.contained

    @property
    def consistent(self) -> bool:
        """For nested pairs equal multiplicity must match equal saturation."""
        return self.not_nested or self.equal_mult == self.equal_saturation


def rees_check(F: Filtration, G: Filtration, box: Sequence[int] | None = None) -> ReesReport:
    """Compare F (expected inside G) by multiplicity and by saturation."""
    RF, RG = fl.limit_body(F), fl.limit_body(G)
    asymptotic = all(any(ph.contains(q, p) for q in ph.region_parts(RG)) for p in ph.region_parts(RF))
    contained = asymptotic and jump_dominated(F, G, box)
    e_f, e_g = region_multiplicity(RF), region_multiplicity(RG)
    return ReesReport(contained, e_f, e_g, e_f == e_g, RF == RG)


@dataclass
class EquivalenceReport:
    e_f: Fraction
    e_inter: Fraction
    e_g: Fraction
    equal_saturation: bool

    @property
    def equivalent(self) -> bool:
        return self.e_f == self.e_inter == self.e_g

    @property
    def consistent(self) -> bool:
        return self.equivalent == self.equal_saturation


def equivalence_check(F: Filtration, G: Filtration) -> EquivalenceReport:
    RF, RG = fl.limit_body(F), fl.limit_body(G)
    return EquivalenceReport(
        region_multiplicity(RF),
        region_multiplicity(fl.limit_body(Inter(F, G))),
        region_multiplicity(RG),
        RF == RG,
    )


# ---------------------------------------------------------------- concavity scans


def _grid(points: int) -> list[Fraction]:
    if points < 3:
        raise ValueError("need at least three grid points")
    return [Fraction(i, points - 1) for i in range(points)]


def concavity_sign(ts: Sequence[Fraction], inv: Sequence[Fraction], n: int, i: int, j: int, k: int) -> int:
    """Sign of f(t_j) - chord(t_i, t_k)(t_j) for f = inv**(1/n), scaled by t_k - t_i > 0."""
    return sign_of_radical_sum(
        [(ts[k] - ts[i], inv[j]), (-(ts[k] - ts[j]), inv[i]), (-(ts[j] - ts[i]), inv[k])], n
    )


@dataclass
class ConcavityScan:
    ts: list[Fraction]
    values: list[Fraction]  # E(t) (or vol) exactly; the n-th root of 1/value is the scanned function
    n: int
    concave: bool
    linear: bool
    proportional: bool

    @property
    def consistent(self) -> bool:
        return self.concave and self.linear == self.proportional

    def rows(self) -> list[tuple[Fraction, Fraction, float]]:
        return [(t, v, float(1 / v) ** (1 / self.n)) for t, v in zip(self.ts, self.values)]


def _scan(ts, values, n, proportional) -> ConcavityScan:
    inv = [1 / v for v in values]
    idx = range(len(ts))
    concave = all(concavity_sign(ts, inv, n, i, j, k) >= 0 for i in idx for j in idx for k in idx if i < j < k)
    linear = all(concavity_sign(ts, inv, n, i, i + 1, i + 2) == 0 for i in range(len(ts) - 2))
    return ConcavityScan(list(ts), list(values), n, concave, linear, proportional)


def geodesic_scan(F: Filtration, G: Filtration, points: int = 9) -> ConcavityScan:
    """E(t)^(-1/n) on a uniform grid: concavity at all triples, linearity on consecutive ones."""
    ts = _grid(points)
    values = [geodesic_E(F, G, t) for t in ts]
    proportional = fl.proportionality(F, G) is not None
    return _scan(ts, values, F.dim, proportional)


def volume_convexity_scan(alpha: Sequence, beta: Sequence, points: int = 16) -> ConcavityScan:
    """vol(v_w)^(-1/n) along w = (1-t) alpha + t beta, against the chord."""
    alpha = tuple(frac(a) for a in alpha)
    beta = tuple(frac(b) for b in beta)
    if len(alpha) != len(beta) or any(a <= 0 for a in alpha + beta):
        raise ValueError("weights must be positive vectors of equal length")
    ts = _grid(points)
    vols = [1 / math.prod(((1 - t) * a + t * b for a, b in zip(alpha, beta)), start=Fraction(1)) for t in ts]
    ratios = {a / b for a, b in zip(alpha, beta)}
    return _scan(ts, vols, len(alpha), len(ratios) == 1)


def chord_table(scan: ConcavityScan) -> list[dict]:
    """Per grid point: exact value, its root, and the chord between the endpoints (decimals for display)."""
    n = scan.n
    first = float(1 / scan.values[0]) ** (1 / n)
    last = float(1 / scan.values[-1]) ** (1 / n)
    out = []
    for t, v in zip(scan.ts, scan.values):
        sign = sign_of_radical_sum([(1, 1 / v), (-(1 - t), 1 / scan.values[0]), (-t, 1 / scan.values[-1])], n)
        out.append(
            {"t": t, "value": v, "root": float(1 / v) ** (1 / n), "chord": (1 - float(t)) * first + float(t) * last, "sign": sign}
        )
    return out
