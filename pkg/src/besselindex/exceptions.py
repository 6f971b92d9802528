"""Exception types raised by besselindex."""


class BesselIndexError(Exception):
    """Base class for all package errors."""


class DomainError(BesselIndexError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class AccuracyError(BesselIndexError, ArithmeticError):
    """A requested tolerance cannot be met by any available evaluation path."""


class ProfileClassError(BesselIndexError, ValueError):
    """A periodic profile violates the function class a theorem requires."""


class AdmissibilityError(BesselIndexError, ValueError):
    """A coefficient sequence is not admissible for the requested transform."""
