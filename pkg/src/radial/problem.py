"""Radial Dirichlet problem data and shot records."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from scipy.special import gamma as gamma_fn

from ..nonlinearity import Nonlinearity, format_family
from ..utils.errors import ParameterDomainError
from .weights import ConstantWeight, RadialWeight


def ball_volume(N: int) -> float:
    """omega_N, the volume of the unit ball in R^N."""
    return float(math.pi ** (N / 2) / gamma_fn(N / 2 + 1))


def sphere_area(N: int) -> float:
    """N * omega_N, the area of the unit sphere in R^N."""
    return N * ball_volume(N)


class RadialProblem(BaseModel):
    """-Delta_N u = a(|x|) f(u), u(0) = M, u'(0) = 0."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    N: int = Field(ge=2)
    nl: Nonlinearity
    weight: RadialWeight = ConstantWeight()
    M: float = Field(gt=0)

    def __init__(self, **data: Any):
        try:
            super().__init__(**data)
        except ValidationError as e:
            raise ParameterDomainError(f"Invalid radial problem: {e}") from e
        if not math.isfinite(self.M):
            raise ParameterDomainError("Initial height M must be finite")

    @property
    def log_f_center(self) -> float:
        return float(self.nl.log_f(self.M))

    @property
    def log_mu(self) -> float:
        """log of the rescaling length mu_M = f(M)^{-1/N}."""
        return -self.log_f_center / self.N


class ShotStatus(str, Enum):
    CROSSED_ZERO = "CrossedZero"
    RADIUS_CAP_REACHED = "RadiusCapReached"
    STEP_FAILURE = "StepFailure"


@dataclass(frozen=True)
class RadialShot:
    """Result of one shooting integration.

    ``radius``, ``u`` and ``q`` are in the integration variables: physical
    (r, u, r^{N-1}|u'|^{N-2}u') or, when ``rescaled``, (rho, v, q~) with
    r = mu rho and u = M + v. ``R``, ``slope_at_R`` and ``mass`` are always
    physical.
    """

    problem: RadialProblem
    radius: np.ndarray
    u: np.ndarray
    q: np.ndarray
    status: ShotStatus
    mass: float
    R: Optional[float]
    slope_at_R: Optional[float]
    tol: float
    origin_offset: float
    rescaled: bool = False
    log_mu: float = 0.0
    solution: Any = field(default=None, repr=False, compare=False)

    @property
    def crossed(self) -> bool:
        return self.status == ShotStatus.CROSSED_ZERO

    @property
    def radius_end(self) -> float:
        return float(self.radius[-1])

    def physical_radius(self) -> np.ndarray:
        return self.radius * math.exp(self.log_mu) if self.rescaled else self.radius

    def physical_u(self) -> np.ndarray:
        return self.problem.M + self.u if self.rescaled else self.u

    def summary(self) -> Dict[str, Any]:
        return {
            "N": self.problem.N,
            "family": format_family(self.problem.nl),
            "weight": self.problem.weight.describe(),
            "M": self.problem.M,
            "status": self.status.value,
            "R": self.R,
            "slope_at_R": self.slope_at_R,
            "mass": self.mass,
            "rescaled": self.rescaled,
            "log_mu": self.log_mu,
            "tol": self.tol,
            "steps": int(self.radius.size),
        }

    def columns(self) -> Dict[str, np.ndarray]:
        """Radial profile columns for CSV output."""
        if self.rescaled:
            return {"rho": self.radius, "v": self.u, "qtilde": self.q}
        return {"r": self.radius, "u": self.u, "q": self.q}
