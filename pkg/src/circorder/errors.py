"""Exception types raised by circorder."""

from __future__ import annotations


class CircOrderError(Exception):
    """Base class for all library errors."""


class InvalidGroup(CircOrderError, ValueError):
    pass


class ElementMismatch(CircOrderError, ValueError):
    """An element does not belong to the group (or order) it was used with."""


class UnsupportedVariant(CircOrderError, TypeError):
    pass


class InvalidOrder(CircOrderError, ValueError):
    pass


class PreconditionError(CircOrderError, ValueError):
    pass


class DependentParameters(InvalidOrder):
    """Rotation or translation parameters are not linearly independent over Q.

    ``witness`` holds the rational coefficients of a vanishing combination,
    aligned with ``(1, theta_1, ..., theta_n)``.
    """

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


class CutCompatibilityError(InvalidOrder):
    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


class NotAutomorphism(CircOrderError, ValueError):
    pass


class DensitySearchExhausted(CircOrderError, RuntimeError):
    pass


class NotUnsat(CircOrderError, ValueError):
    """A clause set handed to certificate minimization is satisfiable."""


class SchemaError(CircOrderError, ValueError):
    """Malformed JSON input; ``path`` is a JSONPath-like locator."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class InternalInvariantError(CircOrderError, RuntimeError):
    """Something the library guarantees did not hold. Always a bug."""
