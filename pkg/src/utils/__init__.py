"""Shared components for the N-Laplacian lab.

This module provides configuration management, logging setup, the error
taxonomy and the CSV/JSON artifact writers used by every other package.
"""

from .config import LabConfig, get_config, load_config, use_config
from .errors import (
    LabError,
    DomainError,
    ParameterDomainError,
    ArgumentError,
    NotApplicableError,
    RegimeError,
    NumericalError,
    ToleranceError,
    InconclusiveClassificationError,
    CoverageError,
)
from .logging import setup_logger

__all__ = [
    "LabConfig",
    "load_config",
    "get_config",
    "use_config",
    "LabError",
    "DomainError",
    "ParameterDomainError",
    "ArgumentError",
    "NotApplicableError",
    "RegimeError",
    "NumericalError",
    "ToleranceError",
    "InconclusiveClassificationError",
    "CoverageError",
    "setup_logger",
]
