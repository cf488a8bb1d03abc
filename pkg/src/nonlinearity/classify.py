"""Criticality classification and growth envelopes.

The classifier reads the trace of s(t) = f'(t)/f(t) on a geometric grid and
decides between Subcritical (s -> 0), Critical (s -> beta > 0) and
Supercritical (s -> inf). The envelope certifies two-sided bounds of the
form D e^{(beta -/+ eps) t} -/+ C for a non-supercritical growth.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple
import logging
import math

import numpy as np

from ..utils.config import ClassifySettings, EnvelopeSettings, get_config
from ..utils.errors import (
    InconclusiveClassificationError,
    NotApplicableError,
    ParameterDomainError,
    ToleranceError,
)
from .base import Nonlinearity

logger = logging.getLogger(__name__)


class CriticalityKind(str, Enum):
    SUBCRITICAL = "Subcritical"
    CRITICAL = "Critical"
    SUPERCRITICAL = "Supercritical"


@dataclass(frozen=True)
class Criticality:
    """Classification verdict with the sampled trace it was read from."""

    kind: CriticalityKind
    beta: float
    trace: Tuple[Tuple[float, float], ...] = field(default=())
    rule: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "beta": self.beta,
            "rule": self.rule,
            "trace": [[t, s] for t, s in self.trace],
        }


def default_grid(settings: Optional[ClassifySettings] = None) -> np.ndarray:
    settings = settings or get_config().classify
    return settings.t0 * 2.0 ** np.arange(settings.points)


def _relative_change(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(b - a) / scale if scale > 0 else 0.0


def classify(
    nl: Nonlinearity,
    t_grid: Optional[Sequence[float]] = None,
    settings: Optional[ClassifySettings] = None,
) -> Criticality:
    """Classify a nonlinearity by the trend of f'/f on a geometric grid.

    Args:
        nl: Nonlinearity to classify
        t_grid: Strictly increasing grid of at least 8 positive points
        settings: Thresholds; defaults to the loaded lab configuration

    Returns:
        Criticality with beta = 0, the extrapolated limit, or inf

    Raises:
        ParameterDomainError: If the grid is too short or not increasing
        InconclusiveClassificationError: If no rule applies
    """
    settings = settings or get_config().classify
    grid = np.asarray(default_grid(settings) if t_grid is None else t_grid, dtype=float)

    if grid.ndim != 1 or grid.size < 8:
        raise ParameterDomainError("Classification grid needs at least 8 points")
    if grid[0] <= 0 or np.any(np.diff(grid) <= 0):
        raise ParameterDomainError("Classification grid must be positive and strictly increasing")

    s = np.asarray(nl.dlog_f(grid), dtype=float)
    if not np.all(np.isfinite(s)):
        raise InconclusiveClassificationError("Non-finite slope in trace", trace=s)

    trace = tuple(zip(grid.tolist(), s.tolist()))
    s_prev2, s_prev, s_last = s[-3], s[-2], s[-1]
    diffs = np.diff(s)

    if np.all(s == 0):
        return Criticality(CriticalityKind.SUBCRITICAL, 0.0, trace, "identically zero")

    if s_last > settings.divergence_threshold:
        return Criticality(CriticalityKind.SUPERCRITICAL, math.inf, trace, "divergence threshold")

    if s_last <= s_prev <= s_prev2:
        if s_last < settings.vanish_threshold:
            return Criticality(CriticalityKind.SUBCRITICAL, 0.0, trace, "vanishing tail")
        # Local power-law decay exponents of the last two steps
        ratios = np.log(s[-3:-1] / s[-2:]) / np.log(grid[-2:] / grid[-3:-1])
        if (
            ratios[-1] >= settings.min_decay_exponent
            and abs(ratios[-1] - ratios[-2]) <= settings.decay_exponent_spread
        ):
            return Criticality(CriticalityKind.SUBCRITICAL, 0.0, trace, "power-law decay")

    # Richardson extrapolation assumes O(1/t) convergence on a doubling grid
    extrapolated = 2.0 * s[-2:] - s[-3:-1]
    stable_raw = _relative_change(s_prev, s_last) < settings.stabilization_threshold
    stable_extrapolated = (
        _relative_change(extrapolated[0], extrapolated[1]) < settings.stabilization_threshold
    )
    if stable_raw or stable_extrapolated:
        beta = float(extrapolated[-1])
        if beta > 0:
            rule = "stabilized" if stable_raw else "stabilized after extrapolation"
            return Criticality(CriticalityKind.CRITICAL, beta, trace, rule)

    if diffs[-1] > 0 and diffs[-2] > 0 and diffs[-1] >= 0.9 * diffs[-2]:
        return Criticality(CriticalityKind.SUPERCRITICAL, math.inf, trace, "monotone growth")

    raise InconclusiveClassificationError(
        f"Slope trace of {nl.family} neither vanishes, stabilizes nor diverges",
        trace=s,
    )


@dataclass(frozen=True)
class GrowthEnvelope:
    """Certified bounds  min(0, D e^{(beta-eps)t} - C) <= f <= D e^{(beta+eps)t} + C  on [t_min, inf)."""

    epsilon: float
    beta: float
    C: float
    D: float
    t_min: float
    verified_until: float = math.inf

    def violations(self, nl: Nonlinearity, t: Sequence[float]) -> np.ndarray:
        """Boolean mask of grid points where either bound fails (log-space test)."""
        t = np.asarray(t, dtype=float)
        log_f = np.asarray(nl.log_f(t), dtype=float)
        log_C, log_D = math.log(self.C), math.log(self.D)

        upper = np.logaddexp(log_D + (self.beta + self.epsilon) * t, log_C)
        upper_bad = log_f > upper + 1e-12 * np.maximum(1.0, np.abs(upper))

        a = log_D + (self.beta - self.epsilon) * t
        lower_bad = np.zeros_like(t, dtype=bool)
        active = a > log_C
        if np.any(active):
            with np.errstate(divide="ignore"):
                lower = a[active] + np.log1p(-np.exp(log_C - a[active]))
            lower_bad[active] = log_f[active] < lower - 1e-12 * np.maximum(1.0, np.abs(lower))
        return upper_bad | lower_bad

    def holds(self, nl: Nonlinearity, t: Sequence[float]) -> bool:
        return not bool(np.any(self.violations(nl, t)))

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "beta": self.beta,
            "C": self.C,
            "D": self.D,
            "t_min": self.t_min,
            "verified_until": self.verified_until,
        }


def envelope(
    nl: Nonlinearity,
    epsilon: float,
    t_min: float,
    settings: Optional[EnvelopeSettings] = None,
    classify_settings: Optional[ClassifySettings] = None,
) -> GrowthEnvelope:
    """Construct and verify a growth envelope for a non-supercritical nonlinearity.

    Args:
        nl: Nonlinearity
        epsilon: Slack on the exponential rate (> 0)
        t_min: Start of the validity interval (>= 0)

    Returns:
        GrowthEnvelope verified on a geometric grid of [t_min, verified_until]

    Raises:
        NotApplicableError: If nl is Supercritical
        ToleranceError: If the computed envelope fails verification
    """
    settings = settings or get_config().envelope
    if epsilon <= 0 or not math.isfinite(epsilon):
        raise ParameterDomainError(f"epsilon must be positive, got {epsilon}")
    if t_min < 0:
        raise ParameterDomainError(f"t_min must be non-negative, got {t_min}")

    try:
        crit = classify(nl, settings=classify_settings)
        beta = crit.beta
        supercritical = crit.kind == CriticalityKind.SUPERCRITICAL
    except InconclusiveClassificationError:
        if nl.exact_beta is None:
            raise
        logger.warning(f"Classification inconclusive, using closed-form beta={nl.exact_beta}")
        beta = nl.exact_beta
        supercritical = math.isinf(beta)

    if supercritical:
        raise NotApplicableError("Growth envelopes do not exist for supercritical nonlinearities")

    start = max(t_min, 1e-12)
    t_hi = settings.sample_factor * max(start, 1.0)
    grid = np.geomspace(start, t_hi, settings.verification_points)
    doublings = 0
    # Extend until the maximum of log f - (beta+eps) t lies in the first half of the range
    while grid[np.argmax(np.asarray(nl.log_f(grid), dtype=float) - (beta + epsilon) * grid)] > 0.5 * t_hi:
        if doublings == settings.max_doublings:
            logger.warning(f"Envelope sampling range did not settle by t={t_hi:.3g}")
            break
        t_hi *= 2.0
        doublings += 1
        grid = np.geomspace(start, t_hi, settings.verification_points)

    if t_min == 0:
        grid = np.concatenate(([0.0], grid))
    log_f = np.asarray(nl.log_f(grid), dtype=float)
    log_D = math.log(settings.safety_factor) + float(np.max(log_f - (beta + epsilon) * grid))
    if not math.isfinite(log_D):
        log_D = 0.0
    D = math.exp(log_D)

    with np.errstate(over="ignore"):
        deficit = np.exp(log_D + (beta - epsilon) * grid) - np.exp(log_f)
    C = settings.safety_factor * max(float(np.max(deficit)), 1.0)

    verify_until = settings.sample_factor * t_hi
    env = GrowthEnvelope(epsilon, beta, C, D, t_min, verify_until)
    check = np.geomspace(start, verify_until, settings.verification_points)
    if not env.holds(nl, check):
        raise ToleranceError(
            f"Envelope for {nl.family} failed verification on [{t_min}, {verify_until:.3g}]"
        )
    logger.debug(f"Envelope beta={beta:.6g} C={C:.4g} D={D:.4g} verified to {verify_until:.3g}")
    return env
