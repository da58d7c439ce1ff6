"""Exception hierarchy shared by all modules."""


class BesselHitError(Exception):
    """Base class for errors raised by this package."""


class DomainError(BesselHitError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(BesselHitError, ValueError):
    """An experiment or walk configuration violates its invariants."""


class NumericError(BesselHitError, ArithmeticError):
    """A numerical procedure failed (bracketing, rejection cap, ...)."""


class ConvergenceError(NumericError):
    """A series did not converge; ``partial_sum`` holds the truncated value."""

    def __init__(self, message, partial_sum=None, terms=None):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms = terms


class RejectionCapError(NumericError):
    """A rejection loop exceeded its iteration cap."""


class TruncationError(NumericError):
    """A walk hit ``max_steps`` before reaching the epsilon-shell.

    ``sample`` is the partial :class:`~besselhit.walk.PassageSample`.
    """

    def __init__(self, message, sample=None):
        super().__init__(message)
        self.sample = sample
