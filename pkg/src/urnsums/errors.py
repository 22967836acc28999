"""Exception hierarchy shared across the package."""


class UrnsumsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(UrnsumsError):
    """An argument lies outside the domain a formula is valid on."""


class PoleError(DomainError):
    """A gamma/digamma argument hit a nonpositive integer pole."""


class ZeroDenominatorError(DomainError):
    """A denominator binomial coefficient vanishes inside a sum."""


class UndefinedSeriesError(DomainError):
    """A lower series parameter is a nonpositive integer and no upper
    parameter terminates the series before the resulting division by zero."""


class DivergenceError(UrnsumsError):
    """A non-terminating series was requested outside its convergence region."""
