"""Branch diagrams over the initial height and mass quantization."""

from .quantization import QuantizationReport, quantization_probe
from .sweep import BoundCertificate, BranchDiagram, UnitBallSolution, sweep

__all__ = [
    "BranchDiagram",
    "UnitBallSolution",
    "BoundCertificate",
    "sweep",
    "QuantizationReport",
    "quantization_probe",
]
