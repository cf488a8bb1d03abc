"""Blow-up rescaling of radial shots and comparison with the limit profiles.

A shot with centre height M is viewed in the variables

    rho = r / mu,   v(rho) = u(mu rho) - M,   mu = f(M)^{-1/N},

in which the flux variable is unchanged. For critical growth the rescaled
profiles approach the Liouville profile; for subcritical growth they
approach the solution of -Delta_N v = a(0).
"""

from dataclasses import dataclass
from typing import Dict, Tuple
import logging
import math

import numpy as np

from ..nonlinearity import CriticalityKind, classify
from ..radial import RadialShot, sphere_area
from ..utils.errors import CoverageError, NotApplicableError, ParameterDomainError
from .liouville import LiouvilleProfile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RescaledProfile:
    """Rescaled samples (rho, v, v') of a shot, with the origin point prepended."""

    shot: RadialShot
    log_mu: float
    rho: np.ndarray
    v: np.ndarray
    vprime: np.ndarray

    @property
    def rho_end(self) -> float:
        return float(self.rho[-1])

    def window(self, R_cmp: float) -> float:
        """Largest comparison radius available up to R_cmp.

        A shot that crossed v = -M before R_cmp ends the rescaled domain there;
        a shot that stopped without crossing does not cover the window.
        """
        if R_cmp <= 0:
            raise ParameterDomainError(f"Comparison radius must be positive, got {R_cmp}")
        if self.rho_end >= R_cmp:
            return R_cmp
        if self.shot.crossed:
            logger.debug(f"Window clamped from {R_cmp} to rescaled domain end {self.rho_end:.6g}")
            return self.rho_end
        raise CoverageError(
            f"Rescaled shot stops at rho={self.rho_end:.6g} before R_cmp={R_cmp}",
            reached=self.rho_end,
        )

    def columns(self, reference: np.ndarray) -> Dict[str, np.ndarray]:
        """Profile CSV columns against a reference profile sampled on rho."""
        reference = np.asarray(reference, dtype=float)
        return {
            "rho": self.rho,
            "v_shot": self.v,
            "v_liouville": reference,
            "gap": np.abs(self.v - reference),
        }


def rescale(shot: RadialShot) -> RescaledProfile:
    """Convert a physical or rescaled shot into blow-up variables."""
    problem = shot.problem
    N = problem.N
    if shot.rescaled:
        log_mu, rho, v = shot.log_mu, shot.radius, shot.u
    else:
        log_mu = problem.log_mu
        if not math.isfinite(log_mu):
            raise ParameterDomainError("Cannot rescale a shot with f(M) = 0")
        rho = shot.radius * math.exp(-log_mu)
        v = shot.u - problem.M

    vprime = -((np.abs(shot.q) / rho ** (N - 1)) ** (1.0 / (N - 1)))
    return RescaledProfile(
        shot=shot,
        log_mu=log_mu,
        rho=np.concatenate(([0.0], rho)),
        v=np.minimum(np.concatenate(([0.0], v)), 0.0),
        vprime=np.concatenate(([0.0], vprime)),
    )


def profile_distance(rp: RescaledProfile, lp: LiouvilleProfile, R_cmp: float) -> Tuple[float, float]:
    """Sup gaps |v_M - v| and |v_M' - v'| on the shot grid within [0, R_cmp].

    Raises:
        CoverageError: If the shot neither reaches R_cmp nor crosses zero
    """
    end = rp.window(R_cmp)
    inside = rp.rho <= end
    rho = rp.rho[inside]
    gap_v = np.max(np.abs(rp.v[inside] - lp.value(rho)))
    gap_vprime = np.max(np.abs(rp.vprime[inside] - lp.derivative(rho)))
    return float(gap_v), float(gap_vprime)


def subcritical_reference(N: int, rho: np.ndarray, a0: float = 1.0) -> np.ndarray:
    """Radial solution of -Delta_N v = a0 with v(0) = 0."""
    return -(N - 1) / N * (a0 / N) ** (1.0 / (N - 1)) * rho ** (N / (N - 1))


def subcritical_limit_check(rp: RescaledProfile, N: int, R_cmp: float) -> float:
    """Sup gap between a rescaled subcritical profile and the -Delta_N v = a(0) solution.

    Raises:
        NotApplicableError: If the shot's nonlinearity is not Subcritical
        CoverageError: As profile_distance
    """
    problem = rp.shot.problem
    if N != problem.N:
        raise ParameterDomainError(f"Dimension mismatch: profile has N={problem.N}, got {N}")
    crit = classify(problem.nl)
    if crit.kind != CriticalityKind.SUBCRITICAL:
        raise NotApplicableError(f"Subcritical limit needs subcritical growth, got {crit.kind.value}")

    end = rp.window(R_cmp)
    inside = rp.rho <= end
    reference = subcritical_reference(N, rp.rho[inside], problem.weight.at_origin)
    return float(np.max(np.abs(rp.v[inside] - reference)))


def concentration_mass(rp: RescaledProfile, R: float) -> float:
    """int_{B_{R mu}} a f(u) = |S^{N-1}| |q~(R)|: the mass concentrating in the rescaled ball of radius R."""
    if R < 0:
        raise ParameterDomainError(f"Radius must be non-negative, got {R}")
    shot = rp.shot
    if R >= rp.rho_end:
        return shot.mass
    if R <= rp.rho[1]:
        # Origin layer: forcing is a(0) f(M) to leading order
        return sphere_area(shot.problem.N) * shot.problem.weight.at_origin * R ** shot.problem.N / shot.problem.N
    own = R if shot.rescaled else R * math.exp(rp.log_mu)
    q = float(shot.solution(own)[1])
    return sphere_area(shot.problem.N) * abs(q)


def slope_along_profile(rp: RescaledProfile) -> Tuple[np.ndarray, np.ndarray]:
    """Effective exponent (log f(M+v) - log f(M)) / v along the profile (v < 0).

    For critical growth the trace approaches beta as M grows.
    """
    problem = rp.shot.problem
    mask = rp.v < 0
    v = rp.v[mask]
    log_ratio = np.asarray(problem.nl.log_f(np.maximum(problem.M + v, 0.0))) - problem.log_f_center
    return rp.rho[mask], log_ratio / v
