"""Exception hierarchy for the lab.

Domain errors (bad parameters, inapplicable operations) map to CLI exit
status 1; numerical errors (tolerance, coverage, inconclusive traces) map
to exit status 2.
"""

from typing import Any, Optional, Sequence


class LabError(Exception):
    """Base class for every error raised by the lab."""

    exit_code = 1


class DomainError(LabError):
    """Input outside the mathematical domain of an operation."""

    exit_code = 1


class ParameterDomainError(DomainError, ValueError):
    """Family or problem parameter outside its admissible range."""


class ArgumentError(DomainError, ValueError):
    """Malformed argument (empty grid, non-increasing heights, bad spec string)."""


class NotApplicableError(DomainError):
    """Operation does not apply to this input (e.g. envelope of a supercritical f)."""


class RegimeError(DomainError):
    """Construction left the regime where its defining inequalities hold."""


class NumericalError(LabError):
    """A numerical procedure failed to reach its target."""

    exit_code = 2


class ToleranceError(NumericalError):
    """Quadrature or root finding did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: Optional[float] = None):
        super().__init__(message)
        self.estimate = estimate


class InconclusiveClassificationError(NumericalError):
    """The f'/f trace matches none of the criticality patterns."""

    def __init__(self, message: str, trace: Sequence[float] = ()):
        super().__init__(message)
        self.trace = list(trace)


class CoverageError(NumericalError):
    """A profile grid does not reach the requested comparison radius."""

    def __init__(self, message: str, reached: Any = None):
        super().__init__(message)
        self.reached = reached
