"""Exception hierarchy.

Regularity failures are data the caller is expected to react to, so each one
names the level at which the construction broke down.
"""

from __future__ import annotations


class GeronimusError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GeronimusError, ValueError):
    pass


class IndexOutOfRange(GeronimusError, IndexError):
    """A moment beyond the end of a finite moment sequence was requested."""

    def __init__(self, index: int, available: int):
        self.index = index
        self.available = available
        super().__init__(f"IndexOutOfRange({index}): only {available} moments available")


class DimensionMismatch(GeronimusError, ValueError):
    pass


class SingularMatrix(GeronimusError, ArithmeticError):
    def __init__(self, column: int):
        self.column = column
        super().__init__(f"SingularMatrix: no nonzero pivot in column {column}")


class RegularityError(GeronimusError):
    """Common parent of the level-indexed regularity failures."""

    level: int
    partial = None

    def __str__(self) -> str:
        return f"{type(self).__name__}({self.level})"


class NotRegular(RegularityError):
    """The leading ``level`` x ``level`` minor of a Gram matrix vanishes."""

    def __init__(self, level: int):
        self.level = level
        super().__init__(level)


class DegenerateDenominator(RegularityError):
    """``d_n* = s0* P_{n-1}(0) + Q_{n-1}(0)`` vanished at ``level``.

    ``partial`` holds the transform truncated to the last good level.
    """

    def __init__(self, level: int, partial=None):
        self.level = level
        self.partial = partial
        super().__init__(level)


class DegenerateDeterminant(RegularityError):
    """The 2x2 determinant ``d_n**`` of the double-transform system vanished."""

    def __init__(self, level: int, partial=None):
        self.level = level
        self.partial = partial
        super().__init__(level)


class ZeroE(RegularityError):
    """``E_{level+1} = 0`` in the expansion of ``t^2 P_level``."""

    def __init__(self, level: int):
        self.level = level
        super().__init__(level)


class MismatchAt(GeronimusError, AssertionError):
    def __init__(self, i: int, j: int, lhs, rhs, identity: str = ""):
        self.i, self.j = i, j
        self.lhs, self.rhs = lhs, rhs
        self.identity = identity
        label = f"{identity}: " if identity else ""
        super().__init__(f"{label}MismatchAt({i},{j}): {lhs} != {rhs}")


class ExpansionResidual(GeronimusError, AssertionError):
    def __init__(self, n: int, detail: str = ""):
        self.n = n
        super().__init__(f"ExpansionResidual({n}) {detail}".rstrip())


class ToleranceExceeded(GeronimusError, AssertionError):
    def __init__(self, residual, tolerance, identity: str = ""):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(f"ToleranceExceeded {identity}: residual {residual} > {tolerance}")


class InternalConsistencyError(GeronimusError, AssertionError):
    """Two independent computation routes disagreed."""
