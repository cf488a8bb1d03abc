"""Liouville profile of -Delta_N v = e^{beta v} in R^N and its mass theta.

The profile solving v(0) = 0 is

    v(r) = -(N / beta) log(1 + kappa r^{N/(N-1)}),
    kappa = (beta^{N-1} / C_N)^{1/(N-1)},  C_N = N (N^2/(N-1))^{N-1},

with total mass theta_N(beta) = omega_N C_N / beta^{N-1}.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union
import logging
import math

import numpy as np
from scipy.integrate import quad

from ..radial import ball_volume, sphere_area
from ..utils.config import BlowupSettings, get_config
from ..utils.errors import ParameterDomainError, ToleranceError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def profile_constant(N: int) -> float:
    """C_N = N (N^2 / (N-1))^{N-1}."""
    return N * (N * N / (N - 1)) ** (N - 1)


def _check(N: int, beta: float) -> None:
    if N < 2:
        raise ParameterDomainError(f"N must be >= 2, got {N}")
    if not (beta > 0 and math.isfinite(beta)):
        raise ParameterDomainError(f"beta must be positive and finite, got {beta}")


@dataclass(frozen=True)
class LiouvilleProfile:
    N: int
    beta: float

    def __post_init__(self):
        _check(self.N, self.beta)

    @property
    def C_N(self) -> float:
        return profile_constant(self.N)

    @property
    def omega_N(self) -> float:
        return ball_volume(self.N)

    @property
    def kappa(self) -> float:
        return (self.beta ** (self.N - 1) / profile_constant(self.N)) ** (1.0 / (self.N - 1))

    def z(self, r: ArrayLike) -> ArrayLike:
        return self.kappa * np.asarray(r, dtype=float) ** (self.N / (self.N - 1))

    def value(self, r: ArrayLike) -> ArrayLike:
        return -(self.N / self.beta) * np.log1p(self.z(r))

    def derivative(self, r: ArrayLike) -> ArrayLike:
        r = np.asarray(r, dtype=float)
        N = self.N
        return -(N * N / ((N - 1) * self.beta)) * self.kappa * r ** (1.0 / (N - 1)) / (1.0 + self.z(r))

    def density(self, r: ArrayLike) -> ArrayLike:
        """e^{beta v(r)} = (1 + z)^{-N}."""
        return (1.0 + self.z(r)) ** (-self.N)

    def flux(self, r: ArrayLike) -> ArrayLike:
        """|S^{N-1}| r^{N-1} |v'(r)|^{N-1}: boundary flux through the sphere of radius r."""
        r = np.asarray(r, dtype=float)
        return sphere_area(self.N) * (r * np.abs(self.derivative(r))) ** (self.N - 1)

    def split_radius(self, decay: float) -> float:
        """Radius where e^{beta v} has dropped to ``decay``."""
        z_split = decay ** (-1.0 / self.N) - 1.0
        return (z_split / self.kappa) ** ((self.N - 1) / self.N)


def liouville_eval(lp: LiouvilleProfile, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Value and exact derivative of the Liouville profile at r >= 0."""
    if np.any(np.asarray(r) < 0):
        raise ParameterDomainError("Liouville profile is evaluated at r >= 0")
    return lp.value(r), lp.derivative(r)


def theta_exact(N: int, beta: float) -> float:
    """theta_N(beta) = omega_N C_N / beta^{N-1}."""
    _check(N, beta)
    return ball_volume(N) * profile_constant(N) / beta ** (N - 1)


def liouville_mass(lp: LiouvilleProfile, r: float, settings: Optional[BlowupSettings] = None) -> float:
    """Mass of e^{beta v} in the ball of radius r by adaptive quadrature."""
    settings = settings or get_config().blowup
    area, N = sphere_area(lp.N), lp.N
    value, err = quad(
        lambda s: area * s ** (N - 1) * lp.density(s),
        0.0,
        r,
        epsabs=0.0,
        epsrel=settings.quad_epsrel,
        limit=settings.quad_limit,
    )
    if err > 1e-6 * max(abs(value), 1e-300):
        raise ToleranceError(f"Liouville mass quadrature error {err:.2e}", estimate=value)
    return value


def _tail_mass(lp: LiouvilleProfile, r_split: float) -> float:
    """Closed-form mass outside r_split.

    With u = 1/(1+z) the tail is  omega_N (N-1) kappa^{1-N} int_0^{u_s} (1-u)^{N-2} du.
    """
    N = lp.N
    u_split = 1.0 / (1.0 + float(lp.z(r_split)))
    primitive = -math.expm1((N - 1) * math.log1p(-u_split))
    return ball_volume(N) * lp.kappa ** (1 - N) * primitive


def theta_quadrature(
    lp: LiouvilleProfile,
    r_split: Optional[float] = None,
    settings: Optional[BlowupSettings] = None,
) -> float:
    """theta by adaptive quadrature on [0, r_split] plus the exact tail."""
    settings = settings or get_config().blowup
    if r_split is None:
        r_split = lp.split_radius(settings.integrand_decay)
    if r_split <= 0:
        raise ParameterDomainError(f"Split radius must be positive, got {r_split}")
    inner = liouville_mass(lp, r_split, settings)
    return inner + _tail_mass(lp, r_split)


def auxiliary_integral(lp: LiouvilleProfile, settings: Optional[BlowupSettings] = None) -> float:
    """int e^{w} over R^N with w = beta v + (N-1) log beta; equals omega_N C_N for every beta."""
    return lp.beta ** (lp.N - 1) * theta_quadrature(lp, settings=settings)


def dirac_fundamental(N: int, a0: float, r_domain: float, x: ArrayLike) -> ArrayLike:
    """Singular solution of -Delta_N w = a0 delta_0 in B_{r_domain}, w = 0 on the boundary.

    w(x) = (a0 / |S^{N-1}|)^{1/(N-1)} log(r_domain / x); +inf at x = 0.
    """
    if a0 <= 0 or r_domain <= 0:
        raise ParameterDomainError("Point mass and domain radius must be positive")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > r_domain):
        raise ParameterDomainError(f"x must lie in (0, {r_domain}]")
    with np.errstate(divide="ignore"):
        out = (a0 / sphere_area(N)) ** (1.0 / (N - 1)) * np.log(r_domain / x)
    return out[()] if out.ndim == 0 else out


def dirac_flux(N: int, a0: float, s: ArrayLike) -> ArrayLike:
    """|S^{N-1}| s^{N-1} |w'(s)|^{N-1} for the singular solution; identically a0."""
    s = np.asarray(s, dtype=float)
    slope = (a0 / sphere_area(N)) ** (1.0 / (N - 1)) / s
    out = sphere_area(N) * (s * slope) ** (N - 1)
    return out[()] if out.ndim == 0 else out
