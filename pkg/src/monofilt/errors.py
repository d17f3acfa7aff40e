"""Exception types shared across the package.

Each error carries an exit code used by the command-line front end.
"""


class MonofiltError(Exception):
    exit_code = 3


class ParseError(MonofiltError, ValueError):
    exit_code = 2


class DimensionMismatch(MonofiltError, ValueError):
    pass


class NotPrimary(MonofiltError, ValueError):
    """An ideal (or filtration member) without finite colength."""


class UnboundedComplement(MonofiltError, ValueError):
    """The region between the origin and an up-closed body is unbounded."""


class SumNotConvex(MonofiltError, ValueError):
    """A union-type limit region was used where a convex body is required."""


class NonConvergence(MonofiltError, RuntimeError):
    exit_code = 4


class SumNotConvexWarning(UserWarning):
    """A convex hull was substituted for a non-convex union."""


class InvalidInput(MonofiltError, ValueError):
    """Well-formed input that breaks a domain invariant (e.g. a non-positive weight)."""
