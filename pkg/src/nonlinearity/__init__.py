"""Nonlinearity families, criticality classification and growth envelopes."""

from .base import Evaluation, Nonlinearity
from .classify import Criticality, CriticalityKind, GrowthEnvelope, classify, envelope
from .families import Affine, ExpCritical, PowerLog, PureExpPower, Scaled
from .grammar import format_family, parse_family

__all__ = [
    "Nonlinearity",
    "Evaluation",
    "PowerLog",
    "ExpCritical",
    "PureExpPower",
    "Scaled",
    "Affine",
    "Criticality",
    "CriticalityKind",
    "GrowthEnvelope",
    "classify",
    "envelope",
    "parse_family",
    "format_family",
]
