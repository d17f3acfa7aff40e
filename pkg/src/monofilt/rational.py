"""Rational parsing/formatting and exact sign decisions for sums of radicals."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import ParseError


def frac(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to Fraction (floats are rejected)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"not a rational: {value!r}")


def fmt(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def fvec(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(frac(v) for v in values)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def iroot(k: int, n: int) -> int | None:
    """Exact integer n-th root of k >= 0, or None when k is not a perfect power."""
    if k < 0:
        raise ValueError("negative radicand")
    if k < 2:
        return k
    r = int(round(math.exp(math.log(k) / n))) if k.bit_length() < 1000 else 1 << (k.bit_length() // n)
    # Newton refinement for large inputs, then local search
    while True:
        nxt = ((n - 1) * r + k // r ** (n - 1)) // n
        if abs(nxt - r) <= 1:
            break
        r = nxt
    for cand in (r - 1, r, r + 1, r + 2):
        if cand >= 0 and cand**n == k:
            return cand
    return None


def rational_root(q: Fraction, n: int) -> Fraction | None:
    """The rational n-th root of q >= 0 if it exists."""
    p = iroot(q.numerator, n)
    d = iroot(q.denominator, n)
    if p is None or d is None:
        return None
    return Fraction(p, d)


def root_float(q: Fraction, n: int) -> float:
    return float(q) ** (1.0 / n)


def sign_of_radical_sum(terms: Iterable[tuple[Fraction, Fraction]], n: int) -> int:
    """Exact sign of sum(c * x**(1/n)) for rational c and rational x >= 0.

    Radicals whose ratio is a rational n-th power are merged first; what is
    left is linearly independent over Q (real radicals of positive rationals),
    so the sum vanishes iff every merged coefficient does.  A nonzero sum has
    its sign certified by interval arithmetic at increasing precision.
    """
    groups: list[list[Fraction]] = []  # [representative radicand, coefficient]
    for c, x in terms:
        c, x = Fraction(c), Fraction(x)
        if x < 0:
            raise ValueError("negative radicand")
        if c == 0 or x == 0:
            continue
        for g in groups:
            r = rational_root(x / g[0], n)
            if r is not None:
                g[1] += c * r
                break
        else:
            groups.append([x, c])
    groups = [g for g in groups if g[1] != 0]
    if not groups:
        return 0
    if len(groups) == 1:
        return 1 if groups[0][1] > 0 else -1
    iv = mpmath.iv
    saved = iv.prec
    try:
        prec = 80
        while prec < 20000:
            iv.prec = prec
            total = iv.mpf(0)
            for x, c in groups:
                xi = iv.mpf(x.numerator) / x.denominator
                ci = iv.mpf(c.numerator) / c.denominator
                total += ci * iv.exp(iv.log(xi) / n)
            if total.a > 0:
                return 1
            if total.b < 0:
                return -1
            prec *= 2
    finally:
        iv.prec = saved
    raise ArithmeticError("could not certify sign")  # unreachable for nonzero sums
