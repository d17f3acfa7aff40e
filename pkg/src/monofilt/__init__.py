"""Exact computations with monomial filtrations: multiplicities, saturations, geodesics and their measures."""

from .errors import (
    DimensionMismatch,
    InvalidInput,
    MonofiltError,
    NonConvergence,
    NotPrimary,
    ParseError,
    SumNotConvex,
    UnboundedComplement,
)
from .filtration import Geo, Inter, MulConst, Pow, Prod, Scale, Sum, Val
from .lattice import MonomialIdeal
from .polyhedra import UpBody

__all__ = [
    "DimensionMismatch",
    "Geo",
    "Inter",
    "InvalidInput",
    "MonofiltError",
    "MonomialIdeal",
    "MulConst",
    "NonConvergence",
    "NotPrimary",
    "ParseError",
    "Pow",
    "Prod",
    "Scale",
    "Sum",
    "SumNotConvex",
    "UnboundedComplement",
    "UpBody",
    "Val",
]
