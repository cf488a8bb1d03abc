"""Truncation energies and the entropy identity for the counterexample.

Both are computed in t = log(1/r), where r^{N-1} dr-weighted radial integrals
become integrals of W(t) = r|w'(r)| and G(t) = r^N (-Delta_N w) with no
singular endpoint.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Tuple, Union
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from scipy.integrate import quad
from scipy.optimize import brentq

from ..radial import sphere_area
from ..utils.config import CounterexampleSettings, get_config
from ..utils.errors import ParameterDomainError, ToleranceError
from .construction import (
    CounterexampleInstance,
    flux_density_at_log,
    flux_speed_at_log,
    level_crossing,
    w_at_log,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class TestFunction(BaseModel, ABC):
    """Smooth radial test function compactly supported in B_rho, in the t variable."""

    __test__ = False

    model_config = ConfigDict(frozen=True, extra="forbid")

    def __init__(self, **data: Any):
        try:
            super().__init__(**data)
        except ValidationError as e:
            raise ParameterDomainError(f"Invalid test function: {e}") from e

    @abstractmethod
    def value_at_log(self, t: ArrayLike) -> ArrayLike:
        """phi at r = e^{-t}."""

    @abstractmethod
    def d_dt_at_log(self, t: ArrayLike) -> ArrayLike:
        """d phi / dt = -r phi'(r)."""

    @property
    @abstractmethod
    def sup_abs(self) -> float:
        """sup |phi|."""

    @property
    def support_radius(self) -> float:
        return 0.0

    def breakpoints(self) -> Tuple[float, ...]:
        return ()


class ZeroTestFunction(TestFunction):
    def value_at_log(self, t: ArrayLike) -> ArrayLike:
        return np.zeros_like(np.asarray(t, dtype=float))[()]

    def d_dt_at_log(self, t: ArrayLike) -> ArrayLike:
        return np.zeros_like(np.asarray(t, dtype=float))[()]

    @property
    def sup_abs(self) -> float:
        return 0.0


class BumpTestFunction(TestFunction):
    """phi(r) = c exp(-1 / (1 - (r/s)^2)) for r < s, 0 otherwise."""

    amplitude: float
    support: float = Field(gt=0)

    def _x(self, t: ArrayLike) -> np.ndarray:
        return np.atleast_1d(np.exp(-np.asarray(t, dtype=float)) / self.support)

    def value_at_log(self, t: ArrayLike) -> ArrayLike:
        x = self._x(t)
        inside = x < 1.0
        out = np.zeros_like(x)
        with np.errstate(divide="ignore", over="ignore"):
            out[inside] = self.amplitude * np.exp(-1.0 / (1.0 - x[inside] ** 2))
        return out.reshape(np.shape(t))[()]

    def d_dt_at_log(self, t: ArrayLike) -> ArrayLike:
        x = self._x(t)
        inside = x < 1.0
        out = np.zeros_like(x)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            xi = x[inside]
            core = np.exp(-1.0 / (1.0 - xi**2))
            out[inside] = self.amplitude * core * 2.0 * xi**2 / (1.0 - xi**2) ** 2
        return np.nan_to_num(out).reshape(np.shape(t))[()]

    @property
    def sup_abs(self) -> float:
        return abs(self.amplitude) * math.exp(-1.0)

    @property
    def support_radius(self) -> float:
        return self.support

    def breakpoints(self) -> Tuple[float, ...]:
        return (-math.log(self.support),)


def _integrate(fn: Callable[[float], float], a: float, b: float, settings: CounterexampleSettings) -> float:
    value, err = quad(fn, a, b, epsabs=0.0, epsrel=settings.quad_epsrel, limit=settings.quad_limit)
    if err > 1e-6 * max(abs(value), 1e-300) and err > 1e-12:
        raise ToleranceError(f"Quadrature on [{a:.6g}, {b:.6g}] reached only {err:.2e}", estimate=value)
    return value


def truncation_energy(
    ce: CounterexampleInstance,
    k: float,
    settings: Optional[CounterexampleSettings] = None,
) -> float:
    """N-energy of T_k w: |S^{N-1}| int_{l(rho)}^{t_k} W(t)^N dt, with w(t_k) = k.

    Raises:
        ParameterDomainError: If k < 0
        ToleranceError: If the quadrature does not converge
    """
    settings = settings or get_config().counterexample
    if k < 0:
        raise ParameterDomainError(f"Truncation level must be non-negative, got {k}")
    if k == 0:
        return 0.0
    t_k = level_crossing(ce, k, settings)
    N = ce.N
    integral = _integrate(lambda t: float(flux_speed_at_log(ce, t)) ** N, ce.l_rho, t_k, settings)
    return sphere_area(N) * integral


@dataclass(frozen=True)
class EntropyCheck:
    lhs: float
    rhs: float
    residual: float
    k: float
    breakpoints: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "k": self.k,
            "band_edges": len(self.breakpoints),
        }


def _band_edges(h: Callable[[np.ndarray], np.ndarray], k: float, t0: float, t1: float, samples: int) -> List[float]:
    """Crossings of h = +k and h = -k on [t0, t1], located by sampling and Brent refinement."""
    grid = np.linspace(t0, t1, samples)
    values = h(grid)
    edges: List[float] = []
    for level in (k, -k):
        shifted = values - level
        idx = np.nonzero(np.sign(shifted[:-1]) * np.sign(shifted[1:]) < 0)[0]
        for i in idx:
            edges.append(
                brentq(lambda t: float(h(np.asarray(t))) - level, grid[i], grid[i + 1], xtol=1e-13)
            )
    return sorted(edges)


def entropy_identity_check(
    ce: CounterexampleInstance,
    phi: TestFunction,
    k: float,
    settings: Optional[CounterexampleSettings] = None,
) -> EntropyCheck:
    """Both sides of  int |grad w|^{N-2} grad w . grad T_k(w - phi) = int a e^{w^alpha} T_k(w - phi).

    In t the left integrand is W^N - W^{N-1} dphi/dt on the band |w - phi| < k
    and the right integrand is G T_k(w - phi). Beyond the point where
    w - phi > k for good, T_k = k and the right side is closed with
    int_t^inf G = W(t)^{N-1}.

    Returns:
        EntropyCheck with residual |LHS - RHS| / (1 + |RHS|)
    """
    settings = settings or get_config().counterexample
    if k <= 0:
        raise ParameterDomainError(f"Truncation level must be positive, got {k}")
    if phi.support_radius >= ce.rho:
        raise ParameterDomainError(
            f"Test function support {phi.support_radius:g} must lie inside B_rho (rho={ce.rho:g})"
        )

    N = ce.N
    L = ce.l_rho
    t_end = level_crossing(ce, k + phi.sup_abs + 1.0, settings)

    def h(t):
        return w_at_log(ce, t) - phi.value_at_log(t)

    def W(t):
        return float(flux_speed_at_log(ce, t))

    def G(t):
        return float(flux_density_at_log(ce, t))

    edges = _band_edges(h, k, L, t_end, settings.band_samples)
    extra = [b for b in phi.breakpoints() if L < b < t_end]
    points = sorted({L, t_end, *edges, *extra})

    lhs = rhs = 0.0
    for a, b in zip(points[:-1], points[1:]):
        if b - a <= 0:
            continue
        mid = float(h(np.asarray(0.5 * (a + b))))
        if abs(mid) < k:
            lhs += _integrate(
                lambda t: W(t) ** N - W(t) ** (N - 1) * float(phi.d_dt_at_log(t)), a, b, settings
            )
            rhs += _integrate(lambda t: G(t) * float(h(np.asarray(t))), a, b, settings)
        else:
            rhs += math.copysign(k, mid) * _integrate(G, a, b, settings)

    rhs += k * W(t_end) ** (N - 1)

    area = sphere_area(N)
    lhs, rhs = area * lhs, area * rhs
    residual = abs(lhs - rhs) / (1.0 + abs(rhs))
    logger.debug(f"Entropy identity k={k:g}: LHS={lhs:.10g} RHS={rhs:.10g} residual={residual:.2e}")
    return EntropyCheck(lhs, rhs, residual, k, edges)
