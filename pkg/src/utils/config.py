"""Configuration loading for the N-Laplacian lab.

The YAML file in ``config/lab_config.yaml`` is validated into frozen
pydantic models, one per concern. Library operations take the relevant
section as an optional keyword and fall back to the active configuration.
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union
import logging

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ParameterDomainError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config" / "lab_config.yaml"


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class SolverSettings(_Section):
    """Radial shooting integrator settings."""

    method: str = "RK45"
    rtol_factor: float = Field(0.1, gt=0)
    atol_factor: float = Field(1e-3, gt=0)
    origin_offset: float = Field(1e-6, gt=0, lt=1)
    log_f_cap: float = Field(600.0, gt=0)
    r_cap: float = Field(50.0, gt=0)
    r_cap_rescaled: float = Field(1e7, gt=0)
    min_tol: float = Field(1e-12, gt=0)
    max_tol: float = Field(1e-4, gt=0)
    flux_tolerance_factor: float = Field(100.0, gt=0)


class ClassifySettings(_Section):
    """Asymptotic-slope estimation grid and decision thresholds."""

    t0: float = Field(8.0, gt=0)
    points: int = Field(15, ge=8)
    vanish_threshold: float = Field(1e-3, gt=0)
    stabilization_threshold: float = Field(1e-3, gt=0)
    divergence_threshold: float = Field(1e3, gt=0)
    min_decay_exponent: float = Field(0.05, gt=0)
    decay_exponent_spread: float = Field(0.05, gt=0)


class EnvelopeSettings(_Section):
    """Growth-envelope sampling."""

    sample_factor: float = Field(10.0, gt=1)
    safety_factor: float = Field(2.0, ge=1)
    verification_points: int = Field(1000, ge=10)
    max_doublings: int = Field(40, ge=0)


class BranchSettings(_Section):
    """Sweep and unit-ball root refinement."""

    radius_tolerance: float = Field(1e-6, gt=0)
    max_bisections: int = Field(80, ge=1)
    min_certificate_points: int = Field(2, ge=1)


class BlowupSettings(_Section):
    """Liouville quadrature settings."""

    integrand_decay: float = Field(1e-6, gt=0, lt=1)
    quad_epsrel: float = Field(1e-12, gt=0)
    quad_limit: int = Field(200, ge=10)


class CounterexampleSettings(_Section):
    """Unbounded entropy-solution construction."""

    shrink_factor: float = Field(10.0, gt=1)
    max_shrinks: int = Field(6, ge=0)
    root_tolerance: float = Field(1e-12, gt=0)
    bracket_doublings: int = Field(60, ge=1)
    t_max: float = Field(1e8, gt=1)
    sample_points: int = Field(400, ge=10)
    band_samples: int = Field(4000, ge=100)
    quad_epsrel: float = Field(1e-10, gt=0)
    quad_limit: int = Field(400, ge=10)


class PerformanceSettings(_Section):
    workers: int = Field(1, ge=1)
    show_progress: bool = False


class LoggingSettings(_Section):
    level: str = "INFO"
    log_file: Optional[str] = None


class LabConfig(_Section):
    """Root configuration model."""

    solver: SolverSettings = SolverSettings()
    classify: ClassifySettings = ClassifySettings()
    envelope: EnvelopeSettings = EnvelopeSettings()
    branch: BranchSettings = BranchSettings()
    blowup: BlowupSettings = BlowupSettings()
    counterexample: CounterexampleSettings = CounterexampleSettings()
    performance: PerformanceSettings = PerformanceSettings()
    logging: LoggingSettings = LoggingSettings()


_active_config: Optional[LabConfig] = None


def load_config(path: Optional[Union[str, Path]] = None) -> LabConfig:
    """Load and validate a YAML configuration file.

    Args:
        path: YAML file (None for the packaged default file)

    Returns:
        Validated configuration

    Raises:
        ParameterDomainError: If the file contains invalid values or unknown keys
    """
    config_path = Path(path) if path is not None else DEFAULT_CONFIG_PATH

    if not config_path.exists():
        logger.warning(f"Configuration file not found: {config_path}, using defaults")
        return LabConfig()

    with open(config_path) as f:
        raw: Dict[str, Any] = yaml.safe_load(f) or {}

    try:
        config = LabConfig.model_validate(raw)
    except ValidationError as e:
        raise ParameterDomainError(f"Invalid configuration in {config_path}: {e}") from e

    logger.debug(f"Loaded configuration from {config_path}")
    return config


def use_config(config: LabConfig) -> None:
    """Make ``config`` the active configuration for library defaults."""
    global _active_config
    _active_config = config


def get_config() -> LabConfig:
    """Return the active configuration, loading the packaged file on first use."""
    global _active_config
    if _active_config is None:
        _active_config = load_config()
    return _active_config
