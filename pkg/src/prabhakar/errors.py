"""Exception and warning types shared across the package."""

from __future__ import annotations


class PrabhakarError(Exception):
    """Base class for all numerical errors raised by this package."""


class DomainError(PrabhakarError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class SeriesTruncationError(PrabhakarError):
    """A series did not meet its stopping rule within ``max_terms``."""

    def __init__(self, message: str, last_term: float, partial_sum=None):
        super().__init__(f"{message} (last |term| = {last_term:.3e})")
        self.last_term = last_term
        self.partial_sum = partial_sum


class SeriesDivergenceError(PrabhakarError):
    """Term ratios indicate that a series is not converging."""

    def __init__(self, message: str, partial_sum=None):
        super().__init__(message)
        self.partial_sum = partial_sum


class EnvelopeError(PrabhakarError):
    """A quadrature or transform left its growth/decay envelope."""


class IndeterminateLimitError(PrabhakarError):
    """Extrapolation to ``t -> 0+`` did not settle."""

    def __init__(self, message: str, samples):
        super().__init__(f"{message}; samples={list(samples)}")
        self.samples = tuple(samples)


class PrecisionWarning(UserWarning):
    """Catastrophic cancellation likely destroyed significant digits."""
