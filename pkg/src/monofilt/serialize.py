"""JSON forms of ideals, bodies and filtration descriptors.

Rationals travel as "p/q" strings in lowest terms.  Output is canonical, so
a descriptor written by ``dumps`` reparses to an equal expression and writes
back byte-for-byte.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import filtration as fl
from .errors import MonofiltError, ParseError
from .lattice import MonomialIdeal
from .polyhedra import UpBody
from .rational import fmt, frac


def ideal_to_json(I: MonomialIdeal) -> dict:
    return {"dim": I.dim, "gens": [list(g) for g in sorted(I.gens)]}


def ideal_from_json(obj) -> MonomialIdeal:
    try:
        dim = obj["dim"]
        gens = obj["gens"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"ideal needs 'dim' and 'gens': {obj!r}") from exc
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"bad dimension {dim!r}")
    if not isinstance(gens, list) or not all(isinstance(g, list) for g in gens):
        raise ParseError("gens must be a list of exponent lists")
    for g in gens:
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in g):
            raise ParseError(f"exponents must be integers: {g!r}")
    try:
        return MonomialIdeal.from_generators(dim, [tuple(g) for g in gens])
    except MonofiltError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def body_to_json(P: UpBody) -> dict:
    return {"dim": P.dim, "facets": [{"normal": [fmt(c) for c in a], "offset": fmt(b)} for a, b in P.facets]}


def body_from_json(obj) -> UpBody:
    try:
        facets = [([frac(c) for c in f["normal"]], frac(f["offset"])) for f in obj["facets"]]
        dim = obj["dim"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed body: {obj!r}") from exc
    try:
        return UpBody(dim, facets)
    except MonofiltError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def filtration_to_json(F) -> dict:
    if isinstance(F, fl.Val):
        return {"val": [fmt(a) for a in F.alpha]}
    if isinstance(F, fl.Pow):
        return {"pow": ideal_to_json(F.base)}
    if isinstance(F, fl.MulConst):
        return {"mulconst": {"c": ideal_to_json(F.c), "f": filtration_to_json(F.f)}}
    if isinstance(F, fl.Scale):
        return {"scale": {"r": fmt(F.r), "f": filtration_to_json(F.f)}}
    if isinstance(F, fl.Geo):
        return {"geo": {"f": filtration_to_json(F.f), "g": filtration_to_json(F.g), "t": fmt(F.t)}}
    tag = {fl.Prod: "prod", fl.Inter: "inter", fl.Sum: "sum"}[type(F)]
    return {tag: [filtration_to_json(F.f), filtration_to_json(F.g)]}


_BINARY = {"prod": fl.Prod, "inter": fl.Inter, "sum": fl.Sum}


def filtration_from_json(obj):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParseError(f"a descriptor is a one-key object, got {obj!r}")
    ((tag, body),) = obj.items()
    try:
        if tag == "val":
            if not isinstance(body, list):
                raise ParseError("val takes a list of rationals")
            return fl.Val(tuple(frac(a) for a in body))
        if tag == "pow":
            return fl.Pow(ideal_from_json(body))
        if tag == "mulconst":
            return fl.MulConst(ideal_from_json(body["c"]), filtration_from_json(body["f"]))
        if tag == "scale":
            return fl.Scale(frac(body["r"]), filtration_from_json(body["f"]))
        if tag == "geo":
            return fl.Geo(filtration_from_json(body["f"]), filtration_from_json(body["g"]), frac(body["t"]))
        if tag in _BINARY:
            if not isinstance(body, list) or len(body) != 2:
                raise ParseError(f"{tag} takes exactly two operands")
            return _BINARY[tag](filtration_from_json(body[0]), filtration_from_json(body[1]))
    except MonofiltError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed {tag!r} descriptor") from exc
    raise ParseError(f"unknown descriptor tag {tag!r}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def loads_filtration(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return filtration_from_json(obj)


def jsonable(value):
    """Recursively turn Fractions into "p/q" strings for reports."""
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, MonomialIdeal):
        return ideal_to_json(value)
    if isinstance(value, UpBody):
        return body_to_json(value)
    return value
