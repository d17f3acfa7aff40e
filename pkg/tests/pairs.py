"""Seeded generators of small filtrations for tests."""

import random
from fractions import Fraction

from monofilt import lattice as lat
from monofilt.filtration import Inter, MulConst, Pow, Prod, Scale, Val


def rand_weight(rng, n, top=5):
    return tuple(Fraction(rng.randint(1, top), rng.randint(1, 3)) for _ in range(n))


def rand_primary(rng, n, top=4, extra=2):
    gens = []
    for i in range(n):
        e = [0] * n
        e[i] = rng.randint(1, top)
        gens.append(e)
    for _ in range(rng.randint(0, extra)):
        gens.append([rng.randint(0, top - 1) for _ in range(n)])
    I = lat.MonomialIdeal.from_generators(n, gens)
    return I if not I.is_unit else lat.MonomialIdeal.maximal(n)


def rand_filtration(rng, n, depth=1):
    """A random filtration whose limit body is convex (no Sum nodes)."""
    kind = rng.choice(["val", "pow"] + (["inter", "prod", "scale", "mulconst"] if depth > 0 else []))
    if kind == "val":
        return Val(rand_weight(rng, n))
    if kind == "pow":
        return Pow(rand_primary(rng, n))
    if kind == "scale":
        return Scale(Fraction(rng.randint(1, 4), rng.randint(1, 3)), rand_filtration(rng, n, depth - 1))
    if kind == "mulconst":
        return MulConst(rand_primary(rng, n, top=2), rand_filtration(rng, n, depth - 1))
    cls = Inter if kind == "inter" else Prod
    return cls(rand_filtration(rng, n, depth - 1), rand_filtration(rng, n, depth - 1))


def rand_pair(rng, n, depth=1):
    return rand_filtration(rng, n, depth), rand_filtration(rng, n, depth)


def rng_for(seed):
    return random.Random(seed)


def moderate_filtration(rng, n, depth=1):
    """Like rand_filtration but with weights in [1/2, 3/2] and small ideals.

    Finite-level surrogates converge at rate ~ c/m with c growing with the
    weights, so fixed-m tolerance checks draw from this family.
    """
    kind = rng.choice(["val", "pow"] + (["inter", "prod", "mulconst"] if depth > 0 else []))
    if kind == "val":
        return Val(tuple(Fraction(rng.randint(1, 3), 2) for _ in range(n)))
    if kind == "pow":
        return Pow(rand_primary(rng, n, top=3, extra=1))
    if kind == "mulconst":
        return MulConst(lat.MonomialIdeal.maximal(n), moderate_filtration(rng, n, depth - 1))
    cls = Inter if kind == "inter" else Prod
    return cls(moderate_filtration(rng, n, depth - 1), moderate_filtration(rng, n, depth - 1))
