"""
Custom exceptions for the cellpm application.
"""

from typing import Optional


class ParticleMethodError(Exception):
    """Base class for every error raised by cellpm library code."""

    pass


class IndexRangeError(ParticleMethodError, ValueError):
    """
    Exception raised when a scalar or vectorial index lies outside its index space.

    Index functions are only defined on [1, prod(I)] and [1, I] respectively, so
    out-of-range arguments are programming errors and never absent values.
    """

    pass


class IndexOverflowError(ParticleMethodError, OverflowError):
    """Exception raised when index arithmetic leaves the signed 64-bit range."""

    pass


class DomainViolationError(ParticleMethodError, ValueError):
    """Exception raised when a particle position lies outside [D_min, D_max)."""

    def __init__(
        self,
        message: str,
        particle_id: Optional[int] = None,
        step: Optional[int] = None,
    ):
        super().__init__(message)
        self.particle_id = particle_id
        self.step = step


class ConstraintViolationError(ParticleMethodError):
    """
    Exception raised when a particle method breaks one of the constraints the
    distributed scheme relies on.

    The constraint name (e.g. "movement bound", "compartment range",
    "ghost write") is kept separately so reports can group violations.
    """

    def __init__(
        self,
        message: str,
        constraint: str,
        particle_id: Optional[int] = None,
        step: Optional[int] = None,
    ):
        super().__init__(message)
        self.constraint = constraint
        self.particle_id = particle_id
        self.step = step


class UsageError(ParticleMethodError):
    """Exception raised when an operation is called outside its pre-conditions."""

    pass


class NonTerminationError(ParticleMethodError):
    """Exception raised when the max-iteration guard trips before f(g) holds."""

    def __init__(self, message: str, iterations: int):
        super().__init__(message)
        self.iterations = iterations


class UnknownMethodError(ParticleMethodError, KeyError):
    """Exception raised for a method name missing from the method registry."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown method"


class UnknownModelError(ParticleMethodError, ValueError):
    """Exception raised for an unknown speedup model name."""

    pass


class DivisibilityError(ParticleMethodError, ValueError):
    """Exception raised when N_cell is not a multiple of 3^d in the complexity model."""

    pass


class InstanceFormatError(ParticleMethodError, ValueError):
    """
    Exception raised when an instance document fails to parse or validate.

    Attributes:
        field: dotted path of the offending field, if known
    """

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field
