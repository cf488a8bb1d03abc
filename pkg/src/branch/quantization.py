"""Mass quantization probe on the tail of a critical branch."""

from dataclasses import dataclass
from typing import Optional
import logging
import math

import numpy as np
from scipy.optimize import brentq

from ..blowup.liouville import theta_exact
from ..nonlinearity import CriticalityKind, classify
from ..radial import ShotStatus
from ..utils.errors import NotApplicableError
from .sweep import BranchDiagram

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuantizationReport:
    limit_mass_estimate: float
    theta_ref: float
    rel_gap: float
    method: str
    inconclusive: bool = False
    decay_rate: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "limit_mass_estimate": self.limit_mass_estimate,
            "theta_ref": self.theta_ref,
            "rel_gap": self.rel_gap,
            "method": self.method,
            "inconclusive": self.inconclusive,
            "decay_rate": self.decay_rate,
        }


def _exponential_limit(M: np.ndarray, mass: np.ndarray) -> Optional[tuple]:
    """Fit mass(M) = theta + c e^{-kappa M} through three points; None when ill-conditioned."""
    h1, h2 = M[1] - M[0], M[2] - M[1]
    d1, d2 = mass[1] - mass[0], mass[2] - mass[1]
    ratio = d2 / d1
    if not 0 < ratio < h2 / h1:
        return None

    def mismatch(kappa: float) -> float:
        return math.exp(-kappa * h1) * math.expm1(-kappa * h2) / math.expm1(-kappa * h1) - ratio

    upper = 1.0 / min(h1, h2)
    while mismatch(upper) > 0:
        upper *= 2.0
        if upper > 1e6:
            return None
    kappa = brentq(mismatch, 1e-12 / max(h1, h2), upper, xtol=1e-14)
    return mass[2] + d2 / math.expm1(kappa * h2), kappa


def quantization_probe(diagram: BranchDiagram, beta: Optional[float] = None) -> QuantizationReport:
    """Extrapolate the branch mass as M -> inf and compare with the Liouville mass.

    Args:
        diagram: Branch with at least three crossing shots at the top of the grid
        beta: Critical slope; classified from the diagram's nonlinearity if None

    Raises:
        NotApplicableError: If the nonlinearity is not Critical
    """
    crit = diagram.criticality or classify(diagram.nl)
    if crit.kind != CriticalityKind.CRITICAL:
        raise NotApplicableError(f"Quantization needs critical growth, got {crit.kind.value}")
    beta = crit.beta if beta is None else beta
    theta_ref = theta_exact(diagram.N, beta)

    finite = np.isfinite(diagram.mass_of_M) & np.array(
        [s == ShotStatus.CROSSED_ZERO for s in diagram.statuses]
    )
    M, mass = diagram.M_grid[finite][-3:], diagram.mass_of_M[finite][-3:]
    if M.size < 3:
        raise NotApplicableError("Quantization needs three crossing shots")

    d1, d2 = mass[1] - mass[0], mass[2] - mass[1]
    if d1 * d2 < 0:
        logger.warning("Tail masses are not monotone, reporting the last value")
        estimate = float(mass[-1])
        return QuantizationReport(
            estimate, theta_ref, abs(estimate - theta_ref) / theta_ref, "last-value", True
        )

    fit = _exponential_limit(M, mass) if d1 != 0 else None
    if fit is None:
        estimate, method, kappa = float(mass[-1]), "last-value", None
    else:
        estimate, method, kappa = float(fit[0]), "exponential-fit", float(fit[1])

    rel_gap = abs(estimate - theta_ref) / theta_ref
    logger.info(f"Limit mass {estimate:.8g} vs theta {theta_ref:.8g} ({method}, gap {rel_gap:.2e})")
    return QuantizationReport(estimate, theta_ref, rel_gap, method, False, kappa)
