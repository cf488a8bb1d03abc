"""Base nonlinearity interface for the N-Laplacian lab.

This module provides the abstract base class that every registered growth
law must implement: an exact logarithm of f and an exact logarithmic
derivative f'/f, from which values and derivatives are assembled without
overflow.
"""

from abc import ABC, abstractmethod
from typing import Any, ClassVar, Dict, NamedTuple, Optional, Union
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from ..utils.errors import ParameterDomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Largest log value whose exponential is a finite double
LOG_FLOAT_MAX = math.log(np.finfo(float).max)


class Evaluation(NamedTuple):
    """Value, exact derivative and logarithm of f at one point."""

    f: float
    fprime: float
    log_f: float

    @property
    def overflow(self) -> bool:
        return self.log_f > LOG_FLOAT_MAX


class Nonlinearity(BaseModel, ABC):
    """Abstract base class for registered nonlinearity families.

    Subclasses are immutable parameter records. They implement ``log_f`` and
    ``dlog_f`` analytically for t >= 0 (numpy-vectorized) and declare the
    monotonicity, superlinearity and asymptotic-slope metadata of their family.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: ClassVar[str] = ""

    def __init__(self, **data: Any):
        try:
            super().__init__(**data)
        except ValidationError as e:
            raise ParameterDomainError(
                f"Invalid parameters for {self.__class__.__name__}: {e}"
            ) from e

    @abstractmethod
    def log_f(self, t: ArrayLike) -> ArrayLike:
        """Exact log f(t); -inf where f vanishes."""

    @abstractmethod
    def dlog_f(self, t: ArrayLike) -> ArrayLike:
        """Exact f'(t)/f(t) for t > 0."""

    @property
    @abstractmethod
    def exact_beta(self) -> Optional[float]:
        """Asymptotic slope lim f'/f when known in closed form (inf if divergent)."""

    @property
    def monotone_from(self) -> float:
        """Threshold above which f' >= 0."""
        return 0.0

    def superlinearity_exponent_for(self, N: int) -> Optional[float]:
        """Supremum of the d > 0 with f(t) / t^{N-1+d} -> inf, or None when there is none."""
        return 1.0

    @property
    def superlinearity_exponent(self) -> Optional[float]:
        return self.superlinearity_exponent_for(2)

    def _fprime_where_vanishing(self, t: float) -> float:
        """f'(t) at points where f(t) = 0 (log form is singular there)."""
        return 0.0

    def parameters(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in type(self).model_fields}

    def eval(self, t: float) -> Evaluation:
        """Evaluate f, f' and log f at a single t >= 0.

        Args:
            t: Non-negative argument

        Returns:
            Evaluation with f reported as inf when exp(log f) overflows

        Raises:
            ParameterDomainError: If t is negative
        """
        t = float(t)
        if t < 0 or not math.isfinite(t):
            raise ParameterDomainError(f"Nonlinearities are evaluated on t >= 0, got {t}")

        log_f = float(self.log_f(t))
        if log_f == -math.inf:
            return Evaluation(0.0, float(self._fprime_where_vanishing(t)), log_f)

        slope = float(self.dlog_f(t)) if t > 0 else float(self._slope_at_zero())
        if log_f > LOG_FLOAT_MAX:
            f = math.inf
            fprime = math.inf if slope > 0 else 0.0
        else:
            f = math.exp(log_f)
            fprime = f * slope if math.isfinite(slope) else slope
        return Evaluation(f, fprime, log_f)

    def _slope_at_zero(self) -> float:
        with np.errstate(divide="ignore", invalid="ignore"):
            return float(self.dlog_f(0.0))

    def __call__(self, t: ArrayLike) -> ArrayLike:
        with np.errstate(over="ignore"):
            return np.exp(self.log_f(t))
