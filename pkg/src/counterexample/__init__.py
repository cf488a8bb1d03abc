"""Explicit unbounded entropy solution with bounded weight for e^{t^alpha} growth."""

from .construction import (
    CounterexampleInstance,
    CounterexampleSamples,
    a_at_log,
    a_eval,
    a_limit,
    beta_of_rho,
    build_counterexample,
    flux_density_at_log,
    flux_speed_at_log,
    level_crossing,
    log_a_at_log,
    log_neg_laplacian_at_log,
    pde_residual_at_log,
    samples,
    u_at_log,
    w_alpha_at_log,
    w_alpha_residual_at_log,
    w_at_log,
    w_eval,
    w_prime,
)
from .entropy import (
    BumpTestFunction,
    EntropyCheck,
    TestFunction,
    ZeroTestFunction,
    entropy_identity_check,
    truncation_energy,
)

__all__ = [
    "CounterexampleInstance",
    "CounterexampleSamples",
    "build_counterexample",
    "beta_of_rho",
    "a_limit",
    "samples",
    "u_at_log",
    "w_at_log",
    "w_alpha_at_log",
    "w_alpha_residual_at_log",
    "flux_speed_at_log",
    "flux_density_at_log",
    "log_neg_laplacian_at_log",
    "log_a_at_log",
    "a_at_log",
    "pde_residual_at_log",
    "level_crossing",
    "w_eval",
    "w_prime",
    "a_eval",
    "TestFunction",
    "ZeroTestFunction",
    "BumpTestFunction",
    "EntropyCheck",
    "truncation_energy",
    "entropy_identity_check",
]
