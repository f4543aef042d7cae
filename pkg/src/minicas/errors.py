"""Exception types shared across the kernel.

Plain division by zero raises the builtin ZeroDivisionError; everything
else gets a named class so callers can distinguish bad input (DomainError
and friends) from genuine singularities (PoleError) and from structural
refusals (UnsupportedPatternError, UnevaluatedDerivativeError).
"""

from __future__ import annotations

__all__ = [
    "DomainError",
    "UnsupportedPatternError",
    "UnevaluatedDerivativeError",
    "PoleError",
    "SeriesError",
    "RegistrationError",
    "ShapeError",
    "SingularMatrixError",
    "NoUniqueSolutionError",
    "ParseError",
]


class DomainError(ValueError):
    """An argument lies outside an operation's domain."""


class UnsupportedPatternError(DomainError):
    """A substitution left-hand side is not an atomic symbol."""


class UnevaluatedDerivativeError(DomainError):
    """Differentiation hit a function with no derivative hook."""


class PoleError(ArithmeticError):
    """Evaluation at a pole (log 0, gamma at a nonpositive integer, zeta 1)."""


class SeriesError(ArithmeticError):
    """Series expansion is impossible at the requested point/order."""


class RegistrationError(ValueError):
    """A function (name, arity) pair was registered twice."""


class ShapeError(ValueError):
    """Matrix dimensions do not fit the requested operation."""


class SingularMatrixError(ArithmeticError):
    """Inversion of a matrix with zero determinant."""


class NoUniqueSolutionError(ArithmeticError):
    """A linear system is inconsistent or underdetermined."""


class ParseError(ValueError):
    """Shell input rejected; carries a 1-based character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"error at position {position}: {message}")
        self.message = message
        self.position = position
