"""Liouville limit objects and blow-up rescaling of radial shots."""

from .liouville import (
    LiouvilleProfile,
    auxiliary_integral,
    dirac_flux,
    dirac_fundamental,
    liouville_eval,
    liouville_mass,
    profile_constant,
    theta_exact,
    theta_quadrature,
)
from .rescaling import (
    RescaledProfile,
    concentration_mass,
    profile_distance,
    rescale,
    slope_along_profile,
    subcritical_limit_check,
    subcritical_reference,
)

__all__ = [
    "LiouvilleProfile",
    "liouville_eval",
    "liouville_mass",
    "profile_constant",
    "theta_exact",
    "theta_quadrature",
    "auxiliary_integral",
    "dirac_fundamental",
    "dirac_flux",
    "RescaledProfile",
    "rescale",
    "profile_distance",
    "subcritical_limit_check",
    "subcritical_reference",
    "concentration_mass",
    "slope_along_profile",
]
