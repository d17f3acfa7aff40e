"""The ten acceptance criteria, each with its tolerance and runtime limit.

Every test prints one PASS/FAIL line (capture is bypassed so the line shows
in a plain ``pytest`` run) and then asserts.
"""

import math
import time
from fractions import Fraction

import pytest
from pairs import moderate_filtration, rand_filtration, rand_pair, rand_primary, rand_weight, rng_for

from monofilt import filtration as fl
from monofilt import lattice as lat
from monofilt import measures as ms
from monofilt import multiplicity as mu
from monofilt import okounkov as ok
from monofilt import polyhedra as ph
from monofilt.filtration import Geo, Inter, MulConst, Pow, Scale, Val
from monofilt.lattice import MonomialIdeal


@pytest.fixture
def verdict(capsys):
    start = time.perf_counter()

    def report(num, limit, failures, detail=""):
        elapsed = time.perf_counter() - start
        slow = limit is not None and elapsed >= limit
        ok_ = not failures and not slow
        bound = f" < {limit}s" if limit is not None else ""
        line = f"{'PASS' if ok_ else 'FAIL'} criterion {num:2d}: {elapsed:6.2f}s{bound}  {detail}"
        if failures:
            line += f"  failures: {failures[:3]}"
        with capsys.disabled():
            print("\n" + line)
        assert not failures, failures
        assert not slow, f"runtime {elapsed:.2f}s over {limit}s"

    return report


def V(*a):
    return Val(tuple(Fraction(x) for x in a))


def test_criterion_01_rees_closure_vs_saturation(verdict):
    x = MonomialIdeal.from_generators(1, [(1,)])
    F = MulConst(x, Pow(x))
    bad = []
    for m in range(1, 11):
        closure, flag = fl.rees_closure(F, m)
        sat = fl.saturate(F, m)
        if (closure, flag) != (MonomialIdeal.from_generators(1, [(m + 1,)]), "exact"):
            bad.append(("closure", m, closure, flag))
        if sat != MonomialIdeal.from_generators(1, [(m,)]):
            bad.append(("saturation", m, sat))
        if not (lat.contains_ideal(sat, closure) and closure != sat):
            bad.append(("strict", m))
    verdict(1, 1, bad, "m = 1..10, (x^(m+1)) strictly inside (x^m)")


def test_criterion_02_valuation_geodesics(verdict):
    rng = rng_for(202)
    ts = [Fraction(i, 7) for i in range(8)]
    bad = []
    for _ in range(6):
        a, b = rand_weight(rng, 2), rand_weight(rng, 2)
        for t in ts:
            w = tuple((1 - t) * ai + t * bi for ai, bi in zip(a, b))
            geo = Geo(Val(a), Val(b), t)
            for lam in range(1, 11):
                if fl.evaluate(geo, lam) != fl.evaluate(Val(w), lam):
                    bad.append((a, b, t, lam))
            if mu.geodesic_E(Val(a), Val(b), t) != 1 / math.prod(w):
                bad.append(("E", a, b, t))
    verdict(2, 10, bad, "6 weight pairs x 8 t x 10 levels, ideals and E(t) exact")


def test_criterion_03_geodesic_concavity(verdict):
    rng = rng_for(303)
    pairs = []
    for n in (2, 3):
        for _ in range(10):
            pairs.append(rand_pair(rng, n))
        for _ in range(3):
            F = rand_filtration(rng, n)
            pairs.append((F, Scale(Fraction(rng.randint(1, 4), rng.randint(1, 3)), F)))
    bad = []
    linear = 0
    for F, G in pairs:
        s = mu.geodesic_scan(F, G, points=9)
        # the body test goes through support values, independent of the scan's own verdict
        prop = fl.proportionality_by_support(fl.convex_limit_body(F), fl.convex_limit_body(G)) is not None
        if not s.concave:
            bad.append(("concavity", F, G))
        if s.linear != prop:
            bad.append(("linear iff proportional", F, G, s.linear, prop))
        linear += s.linear
    verdict(3, 60, bad, f"{len(pairs)} pairs, {linear} linear, all triples on a 9-point grid")


def _engineered_equal_pairs(rng):
    """Nested pairs with equal multiplicity and syntactically different descriptors."""
    out = []
    m2 = MonomialIdeal.maximal(2)
    for gens in ([(2, 0), (0, 2)], [(3, 0), (0, 3)], [(4, 0), (0, 2)], [(3, 0), (0, 2)]):
        I = MonomialIdeal.from_generators(2, gens)
        out.append((Pow(I), Pow(lat.integral_closure(I))))
    for _ in range(4):
        b = rand_primary(rng, 2)
        out.append((MulConst(rand_primary(rng, 2, top=2), Pow(b)), Pow(b)))
    for _ in range(4):
        G = rand_filtration(rng, 2)
        out.append((Inter(G, Scale(Fraction(1, 2), G)), G))
    out.append((MulConst(m2, V(1, 2)), V(1, 2)))
    out.append((Inter(V(1, 1), V(2, 1)), V(1, 1)))
    out.append((MulConst(m2, Pow(m2)), Pow(m2)))
    return out


def test_criterion_04_rees_biconditional(verdict):
    rng = rng_for(404)
    engineered = _engineered_equal_pairs(rng)
    pairs = list(engineered)
    while len(pairs) < 100:
        G, H = rand_pair(rng, 2)
        pairs.append((Inter(G, H), G))
    bad = []
    equal = 0
    for F, G in pairs:
        r = mu.rees_check(F, G)
        if not r.contained:
            bad.append(("not nested", F, G))
        if r.equal_mult != r.equal_saturation:
            bad.append(("biconditional", F, G, r.e_f, r.e_g))
        equal += r.equal_mult
    for F, G in engineered:
        if F == G or not mu.rees_check(F, G).equal_mult:
            bad.append(("engineered", F, G))
    verdict(4, 60, bad, f"{len(pairs)} nested pairs, {len(engineered)} engineered, {equal} with equal multiplicity")


def test_criterion_05_minkowski(verdict):
    rng = rng_for(505)
    m2 = MonomialIdeal.maximal(2)
    bad = []
    strict = mu.minkowski_check(Pow(m2), Pow(MonomialIdeal.from_generators(2, [(1, 0), (0, 2)])))
    if (strict.e_prod, strict.e_f, strict.e_g) != (5, 1, 2) or strict.sign >= 0 or strict.equality:
        bad.append(("strict case", strict))
    eq = mu.minkowski_check(Pow(m2), Pow(MonomialIdeal.from_generators(2, [(2, 0), (0, 2)])))
    if (eq.e_prod, eq.e_f, eq.e_g) != (9, 1, 4) or not eq.equality:
        bad.append(("equality case", eq))
    pairs = [rand_pair(rng, rng.choice([2, 3])) for _ in range(40)]
    for _ in range(10):
        F = rand_filtration(rng, rng.choice([2, 3]))
        pairs.append((F, Scale(Fraction(rng.randint(1, 5), rng.randint(1, 3)), F)))
    equalities = 0
    for F, G in pairs:
        r = mu.minkowski_check(F, G)
        prop = fl.proportionality_by_support(fl.convex_limit_body(F), fl.convex_limit_body(G)) is not None
        if r.sign > 0:
            bad.append(("inequality", F, G))
        if r.equality != prop:
            bad.append(("equality iff proportional", F, G))
        equalities += r.equality
    verdict(5, None, bad, f"{len(pairs)} pairs, {equalities} equalities; 5 < (1+sqrt2)^2, 9 = 3^2")


def test_criterion_06_colength_convergence(verdict):
    rng = rng_for(606)
    ms_ = [10, 25, 50, 100, 200]
    bad = []
    worst = 0.0
    for _ in range(10):
        F = moderate_filtration(rng, 2)
        exact = mu.mult_filtration(F, []).exact
        est = [mu.colength_estimate(F, m) for m in ms_]
        if any(e < exact for e in est):
            bad.append(("below exact", F))
        inf = [min(est[: i + 1]) for i in range(len(est))]
        if any(b > a for a, b in zip(inf, inf[1:])):
            bad.append(("running infimum", F))
        rel = float((est[-1] - exact) / exact)
        worst = max(worst, rel)
        if rel >= 0.02:
            bad.append(("2% at m=200", F, rel))
    verdict(6, 30, bad, f"10 filtrations, worst relative error {worst:.2%} at m=200")


def test_criterion_07_measures(verdict):
    rng = rng_for(707)
    pairs = [(V(1, 1), V(2, 2))] + [(moderate_filtration(rng, 2), moderate_filtration(rng, 2)) for _ in range(4)]
    sched = [10, 20, 40, 80, 160]
    t = Fraction(1, 2)
    bad = []
    worst = 0.0
    for F, G in pairs:
        M = ms.GeodesicMeasure(F, G)
        exact = M.halfplane(t)
        _, D = ms.comparability_constants(F, G)
        errs = []
        for m in sched:
            meas = ms.mu_m(F, G, m)
            mass = meas.halfplane(t)
            if mass != ms.halfplane_identity(F, G, t, m):
                bad.append(("identity", F, G, m))
            if not all(ms.in_support_band(x, y, m, D) for x, y in meas.atoms):
                bad.append(("support band", F, G, m))
            errs.append(float(abs(mass - exact) / exact))
        worst = max(worst, errs[-1])
        if errs[-1] >= 0.05:
            bad.append(("5% at m=160", F, G, errs[-1]))
        if errs[-1] > errs[0]:
            bad.append(("no convergence", F, G, errs))
        for a in (Fraction(1, 2), 2, 3):
            for box in [(0, 1, 0, 1), (Fraction(1, 3), 1, Fraction(1, 4), Fraction(3, 2))]:
                if M.box(*(a * c for c in box)) != a**2 * M.box(*box):
                    bad.append(("homogeneity", F, G, a, box))
            if M.halfplane(t, a) != a**2 * M.halfplane(t):
                bad.append(("halfplane homogeneity", F, G, a))
    verdict(7, 60, bad, f"{len(pairs)} pairs, m in {sched}, worst relative error {worst:.2%} at m=160")


def test_criterion_08_segment_integral(verdict):
    rng = rng_for(808)
    pairs = [rand_pair(rng, 2) for _ in range(10)]
    bad = []
    for F, G, c, mass in [(V(1, 1), V(1, 1), Fraction(1, 2), Fraction(1, 4)), (V(1, 1), Scale(2, V(1, 1)), Fraction(2, 3), Fraction(4, 9))]:
        M = ms.GeodesicMeasure(F, G)
        if M.support() != (c, c) or M.tilde_cdf(1) != mass:
            bad.append(("point mass", c, M.support(), M.tilde_cdf(1)))
        pairs.append((F, G))
    worst = 0.0
    for F, G in pairs:
        M = ms.GeodesicMeasure(F, G)
        for t in [Fraction(i, 8) for i in range(9)]:
            exact = float(mu.geodesic_E(F, G, t))
            value, _ = M.E_via_segment(t)
            rel = abs(value - exact) / exact
            worst = max(worst, rel)
            if rel > 1e-6:
                bad.append((F, G, t, rel))
    verdict(8, 30, bad, f"{len(pairs)} pairs x 9 t, worst relative error {worst:.1e}")


def test_criterion_09_truncations(verdict):
    rng = rng_for(909)
    bad = []
    # counting identity at every level
    for _ in range(6):
        F, G = rand_pair(rng, 2)
        t = Fraction(rng.randint(0, 4), 4)
        for m in list(range(1, 13)) + [16, 32]:
            if not ok.truncation(F, G, t, m).identity_ok:
                bad.append(("count identity", F, G, t, m))
    # estimate at m = 64
    worst = 0.0
    for F, G in [(V(1, 1), V(2, 2))] + [(moderate_filtration(rng, 2), moderate_filtration(rng, 2)) for _ in range(6)]:
        t = Fraction(1, 2)
        tr = ok.truncation(F, G, t, 64)
        exact = mu.geodesic_E(F, G, t)
        rel = float(abs(tr.estimate - exact) / exact)
        worst = max(worst, rel)
        if not tr.identity_ok:
            bad.append(("count identity at 64", F, G))
        if rel >= 0.05:
            bad.append(("5% at m=64", F, G, rel))
    # exponential integral
    for _ in range(15):
        P = fl.convex_limit_body(rand_filtration(rng, 2))
        res = ok.exp_integral(ph.gauge_of(P))
        if abs(res.value - 2 * float(ph.covolume(P))) > 1e-8 * max(1.0, res.value):
            bad.append(("exp integral", P, res))
    # second-derivative inequality, equality exactly on proportional pairs
    ts = [Fraction(k, 8) for k in range(1, 8)]
    cs = [rand_pair(rng, 2) for _ in range(8)]
    for _ in range(4):
        F = rand_filtration(rng, 2)
        cs.append((F, Scale(Fraction(rng.randint(1, 4), rng.randint(1, 3)), F)))
    for F, G in cs:
        prop = fl.proportionality(F, G) is not None
        for row in ok.cauchy_schwarz_check(F, G, ts, step=Fraction(1, 1000), slack=1e-6):
            if not row.holds or row.equality != prop:
                bad.append(("cauchy-schwarz", F, G, row.t, row.holds, row.equality, prop))
    verdict(9, 120, bad, f"identity at m=1..12,16,32; worst estimate error {worst:.2%} at m=64; {len(cs)} second-derivative pairs")


def test_criterion_10_volume_convexity(verdict):
    rng = rng_for(1010)
    pairs = []
    for i in range(20):
        a = rand_weight(rng, 2 if i % 2 else 3)
        if i % 5 == 0:
            c = Fraction(rng.randint(1, 4), rng.randint(1, 3))
            b = tuple(c * x for x in a)
        else:
            b = rand_weight(rng, len(a))
        pairs.append((a, b))
    bad = []
    eq = 0
    for a, b in pairs:
        s = mu.volume_convexity_scan(a, b, points=16)
        prop = len({x / y for x, y in zip(a, b)}) == 1
        if not s.concave:
            bad.append(("inequality", a, b))
        if s.linear != prop:
            bad.append(("equality iff proportional", a, b))
        eq += s.linear
    verdict(10, 5, bad, f"20 weight pairs on a 16-point grid, {eq} proportional")
