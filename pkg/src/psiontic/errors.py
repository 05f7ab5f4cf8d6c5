class PsionticError(Exception):
    """Base class for errors raised by this package."""


class DomainError(PsionticError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(PsionticError, MemoryError):
    """The requested size exceeds the configured cap."""


class InfeasibleError(PsionticError, ValueError):
    """Too few systems for a zero-probability measurement at this angle."""


class NumericalError(PsionticError, ArithmeticError):
    """A numerical procedure failed to converge or cross-checks disagree."""
