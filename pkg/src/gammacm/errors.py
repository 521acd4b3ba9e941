"""Exception types shared across the package."""


class GammaCMError(Exception):
    """Base class for all package errors."""


class DomainError(GammaCMError, ValueError):
    """An argument lies outside the domain of a function."""


class PrecisionError(GammaCMError, ArithmeticError):
    """A series did not reach the requested tolerance within the term budget."""


class SpecError(GammaCMError, ValueError):
    """A problem specification is malformed or violates a precondition."""
