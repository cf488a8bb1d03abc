"""Radial shooting for -Delta_N u = a(|x|) f(u) with u(0) = M, u'(0) = 0."""

from .problem import RadialProblem, RadialShot, ShotStatus, ball_volume, sphere_area
from .shooting import (
    accumulated_forcing,
    divergence_defect,
    flux_identity_holds,
    flux_residuals,
    origin_expansion,
    rescaled_shoot,
    shoot,
)
from .weights import ConstantWeight, RadialWeight, RampWeight, TabulatedWeight, parse_weight

__all__ = [
    "RadialProblem",
    "RadialShot",
    "ShotStatus",
    "ball_volume",
    "sphere_area",
    "origin_expansion",
    "shoot",
    "rescaled_shoot",
    "flux_residuals",
    "flux_identity_holds",
    "accumulated_forcing",
    "divergence_defect",
    "RadialWeight",
    "ConstantWeight",
    "RampWeight",
    "TabulatedWeight",
    "parse_weight",
]
