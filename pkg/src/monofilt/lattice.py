"""Monomial ideals stored as staircases (antichains of minimal exponents)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotPrimary

Exponent = tuple[int, ...]

# Sentinel for "no member of the ideal along this fibre".
_FAR = np.iinfo(np.int64).max // 4


def minimize(points: Iterable[Sequence[int]], dim: int) -> tuple[Exponent, ...]:
    """Minimal elements under the coordinatewise order, sorted lexicographically."""
    pts = sorted({tuple(int(c) for c in p) for p in points})
    if dim == 1:
        return (pts[0],) if pts else ()
    if dim == 2:
        out = []
        best = None
        for p in pts:  # x ascending, then y ascending
            if best is None or p[1] < best:
                out.append(p)
                best = p[1]
        return tuple(out)
    # A dominating point has strictly smaller coordinate sum, so scanning by
    # sum lets each point be checked only against already-kept ones.
    kept: list[Exponent] = []
    for p in sorted(pts, key=sum):
        if not any(all(k[i] <= p[i] for i in range(dim)) for k in kept):
            kept.append(p)
    return tuple(sorted(kept))


@dataclass(frozen=True)
class MonomialIdeal:
    dim: int
    gens: tuple[Exponent, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        for g in self.gens:
            if len(g) != self.dim or any(c < 0 for c in g):
                raise ValueError(f"bad exponent {g!r} for dimension {self.dim}")

    @classmethod
    def from_generators(cls, dim: int, gens: Iterable[Sequence[int]]) -> MonomialIdeal:
        gens = list(gens)
        for g in gens:
            if len(g) != dim:
                raise DimensionMismatch(f"exponent {tuple(g)} has length {len(g)}, expected {dim}")
            if any(int(c) < 0 for c in g):
                raise ValueError(f"negative exponent in {tuple(g)}")
        return cls(dim, minimize(gens, dim))

    @classmethod
    def unit(cls, dim: int) -> MonomialIdeal:
        return cls(dim, ((0,) * dim,))

    @classmethod
    def zero(cls, dim: int) -> MonomialIdeal:
        return cls(dim, ())

    @classmethod
    def maximal(cls, dim: int) -> MonomialIdeal:
        return cls.from_generators(dim, [tuple(int(i == j) for j in range(dim)) for i in range(dim)])

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return self.gens == ((0,) * self.dim,)

    def pure_powers(self) -> list[int | None]:
        """Exponent of the pure power on each axis, or None if absent."""
        out: list[int | None] = [None] * self.dim
        for g in self.gens:
            support = [i for i, c in enumerate(g) if c]
            if len(support) == 1:
                out[support[0]] = g[support[0]]
            elif not support:
                return [0] * self.dim
        return out

    def __contains__(self, beta) -> bool:
        return member(self, beta)

    def __str__(self) -> str:
        if self.is_zero:
            return "(0)"
        return "(" + ", ".join(_monomial_str(g) for g in self.gens) + ")"


_VARS = "xyzw"


def _monomial_str(g: Exponent) -> str:
    names = _VARS if len(g) <= 4 else [f"x{i + 1}" for i in range(len(g))]
    parts = [names[i] + (f"^{c}" if c > 1 else "") for i, c in enumerate(g) if c]
    return "*".join(parts) or "1"


def _check(I: MonomialIdeal, J: MonomialIdeal) -> None:
    if I.dim != J.dim:
        raise DimensionMismatch(f"dimensions {I.dim} and {J.dim} differ")


def member(I: MonomialIdeal, beta: Sequence[int]) -> bool:
    if len(beta) != I.dim:
        raise DimensionMismatch(f"exponent of length {len(beta)} in dimension {I.dim}")
    return any(all(g[i] <= beta[i] for i in range(I.dim)) for g in I.gens)


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check(I, J)
    return MonomialIdeal.from_generators(I.dim, I.gens + J.gens)


def intersect(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check(I, J)
    lcms = (tuple(max(a, b) for a, b in zip(g, h)) for g in I.gens for h in J.gens)
    return MonomialIdeal.from_generators(I.dim, lcms)


def product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check(I, J)
    sums = (tuple(a + b for a, b in zip(g, h)) for g in I.gens for h in J.gens)
    return MonomialIdeal.from_generators(I.dim, sums)


def power(I: MonomialIdeal, k: int) -> MonomialIdeal:
    if k < 0:
        raise ValueError("power must be non-negative")
    result = MonomialIdeal.unit(I.dim)
    base = I
    while k:
        if k & 1:
            result = product(result, base)
        k >>= 1
        if k:
            base = product(base, base)
    return result


def is_m_primary(I: MonomialIdeal) -> bool:
    return all(p is not None for p in I.pure_powers())


def contains_ideal(I: MonomialIdeal, J: MonomialIdeal) -> bool:
    """True iff J is a subset of I."""
    _check(I, J)
    return all(member(I, g) for g in J.gens)


def profile(I: MonomialIdeal, box: Sequence[int]) -> np.ndarray:
    """Smallest last coordinate inside I above each prefix in the box.

    ``box`` gives the prefix extents (length dim-1).  Entries with no member
    are the large sentinel ``_FAR``.
    """
    c = np.full(tuple(box), _FAR, dtype=np.int64)
    for g in I.gens:
        head = g[:-1]
        if any(h >= b for h, b in zip(head, box)):
            continue
        view = c[tuple(slice(h, None) for h in head)]
        np.minimum(view, g[-1], out=view)
    return c


def colength(I: MonomialIdeal) -> int:
    """Number of monomials outside I."""
    pures = I.pure_powers()
    if any(p is None for p in pures):
        raise NotPrimary(f"{I} is not primary to the maximal ideal")
    if I.dim == 1:
        return pures[0]
    c = profile(I, pures[:-1])
    return int(c.sum())


def staircase_from_profile(c: np.ndarray) -> list[Exponent]:
    """Minimal generators of the up-closed set described by a profile array."""
    dim = c.ndim + 1
    mask = c < _FAR
    for axis in range(c.ndim):
        prev = np.full_like(c, _FAR)
        src = [slice(None)] * c.ndim
        dst = [slice(None)] * c.ndim
        src[axis] = slice(None, -1)
        dst[axis] = slice(1, None)
        prev[tuple(dst)] = c[tuple(src)]
        mask &= prev > c
    idx = np.argwhere(mask)
    out = [tuple(int(v) for v in row) + (int(c[tuple(row)]),) for row in idx]
    assert all(len(p) == dim for p in out)
    return out


def ideal_from_predicate(dim: int, box: Sequence[int], inside) -> MonomialIdeal:
    """Ideal of all exponents satisfying a monotone predicate, bounded by ``box``.

    Every minimal generator must lie in the box [0, box].  ``inside`` is
    called on single exponents.
    """
    if dim == 1:
        k = next((j for j in range(box[0] + 1) if inside((j,))), None)
        return MonomialIdeal(1, ((k,),) if k is not None else ())
    head = box[:-1]
    last = box[-1]
    c = np.full(tuple(b + 1 for b in head), _FAR, dtype=np.int64)
    for prefix in itertools.product(*(range(b + 1) for b in head)):
        lo, hi = 0, last + 1  # first member lies in [lo, hi]; hi means none
        while lo < hi:
            mid = (lo + hi) // 2
            if inside(prefix + (mid,)):
                hi = mid
            else:
                lo = mid + 1
        if lo <= last:
            c[prefix] = lo
    return MonomialIdeal.from_generators(dim, staircase_from_profile(c))


def ideal_from_mask(mask: np.ndarray) -> MonomialIdeal:
    """Ideal generated by the True cells of an up-closed boolean grid."""
    dim = mask.ndim
    if dim == 1:
        hits = np.flatnonzero(mask)
        return MonomialIdeal(1, ((int(hits[0]),),) if hits.size else ())
    any_hit = mask.any(axis=-1)
    first = np.where(any_hit, mask.argmax(axis=-1), _FAR).astype(np.int64)
    return MonomialIdeal.from_generators(dim, staircase_from_profile(first))


def lattice_box(I: MonomialIdeal) -> tuple[int, ...]:
    """Coordinatewise max over generators."""
    return tuple(max((g[i] for g in I.gens), default=0) for i in range(I.dim))


def newton_polyhedron(I: MonomialIdeal):
    from .polyhedra import up_hull

    if I.is_zero:
        raise ValueError("the zero ideal has no Newton polyhedron")
    return up_hull(I.dim, I.gens)


def integral_closure(I: MonomialIdeal) -> MonomialIdeal:
    """All lattice points of the Newton polyhedron, as a staircase."""
    if I.is_zero:
        return I
    body = newton_polyhedron(I)
    # Clipping a member at the generator-wise max keeps it in the polyhedron,
    # so minimal generators live in that box.
    box = lattice_box(I)
    return ideal_from_predicate(I.dim, box, body.contains_point)
