"""Shooting integration of the radial N-Laplacian problem.

The equation is integrated in flux form

    u' = -(|q| / r^{N-1})^{1/(N-1)},    q' = -r^{N-1} a(r) f(u),

with q = r^{N-1}|u'|^{N-2}u', seeded at a small radius from the leading-order
expansion at the origin. The rescaled variant integrates the blow-up
variables v(rho) = u(mu rho) - M, mu = f(M)^{-1/N}, whose equation involves
only the ratio f(M+v)/f(M) and therefore stays finite for any M.
"""

from typing import Callable, Optional, Tuple
import logging
import math

import numpy as np
from scipy.integrate import solve_ivp

from ..utils.config import SolverSettings, get_config
from ..utils.errors import ParameterDomainError
from .problem import RadialProblem, RadialShot, ShotStatus, sphere_area

logger = logging.getLogger(__name__)

GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _log_drop_coefficient(N: int, log_af: float) -> float:
    """log of c in  M - u(eps) ~ c eps^{N/(N-1)}  for centre forcing a(0) f(M) = e^{log_af}."""
    return math.log((N - 1) / N) + (log_af - math.log(N)) / (N - 1)


def _origin_offset(N: int, log_af: float, drop: float, settings: SolverSettings) -> float:
    """Start radius: a fixed fraction of the radius where the expansion drops by ``drop``."""
    log_ell = (N - 1) / N * (math.log(drop) - _log_drop_coefficient(N, log_af))
    return settings.origin_offset * math.exp(log_ell)


def origin_expansion(
    problem: RadialProblem, eps: float, rescaled: bool = False
) -> Tuple[float, float]:
    """Leading-order state at radius eps.

    Args:
        problem: Radial problem
        eps: Start radius (rho when rescaled)
        rescaled: Return (v, q~) with f normalized by f(M)

    Returns:
        (u(eps), q(eps)), or (v(eps), q~(eps)) when rescaled
    """
    if eps <= 0:
        raise ParameterDomainError(f"Expansion radius must be positive, got {eps}")
    N = problem.N
    log_a0 = math.log(problem.weight.at_origin)
    log_af = log_a0 if rescaled else log_a0 + problem.log_f_center
    if log_af == -math.inf:
        return (0.0 if rescaled else problem.M), 0.0

    drop = math.exp(_log_drop_coefficient(N, log_af) + N / (N - 1) * math.log(eps))
    q = -math.exp(log_af + N * math.log(eps) - math.log(N))
    return (-drop if rescaled else problem.M - drop), q


def _check_tol(tol: float, settings: SolverSettings) -> None:
    if not settings.min_tol <= tol <= settings.max_tol:
        raise ParameterDomainError(
            f"tol must lie in [{settings.min_tol:g}, {settings.max_tol:g}], got {tol:g}"
        )


def _integrate(
    rhs: Callable,
    event: Callable,
    span: Tuple[float, float],
    y0: Tuple[float, float],
    tol: float,
    settings: SolverSettings,
):
    event.terminal = True
    event.direction = -1
    return solve_ivp(
        rhs,
        span,
        list(y0),
        method=settings.method,
        rtol=settings.rtol_factor * tol,
        atol=settings.atol_factor * tol,
        events=event,
        dense_output=True,
    )


def _status(sol) -> ShotStatus:
    if sol.status == 1:
        return ShotStatus.CROSSED_ZERO
    if sol.status == 0:
        return ShotStatus.RADIUS_CAP_REACHED
    logger.warning(f"Integrator stopped: {sol.message}")
    return ShotStatus.STEP_FAILURE


def _trajectory(sol, status: ShotStatus) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    radius, u, q = sol.t, sol.y[0], sol.y[1]
    if status == ShotStatus.CROSSED_ZERO:
        r_end = float(sol.t_events[0][0])
        y_end = sol.y_events[0][0]
        keep = radius < r_end
        radius = np.append(radius[keep], r_end)
        u = np.append(u[keep], y_end[0])
        q = np.append(q[keep], y_end[1])
    return radius, u, q


def shoot(
    problem: RadialProblem,
    r_cap: Optional[float] = None,
    tol: float = 1e-9,
    settings: Optional[SolverSettings] = None,
) -> RadialShot:
    """Integrate from u(0) = M outward until u reaches 0 or r_cap.

    Args:
        problem: Radial problem
        r_cap: Largest radius to integrate to
        tol: Accuracy target; rtol and atol are fixed fractions of it
        settings: Solver settings

    Returns:
        RadialShot in physical variables, or a rescaled shot when f(M) is
        too large to represent

    Raises:
        ParameterDomainError: Bad tol, r_cap or weight
    """
    settings = settings or get_config().solver
    r_cap = settings.r_cap if r_cap is None else r_cap
    _check_tol(tol, settings)
    if r_cap <= 0:
        raise ParameterDomainError(f"r_cap must be positive, got {r_cap}")

    if problem.log_f_center > settings.log_f_cap:
        logger.warning(
            f"log f(M) = {problem.log_f_center:.1f} exceeds {settings.log_f_cap}, "
            f"switching to rescaled variables"
        )
        return rescaled_shoot(problem, r_cap * math.exp(-problem.log_mu), tol, settings)

    N, M, nl, weight = problem.N, problem.M, problem.nl, problem.weight
    weight.check_positive(r_cap)

    log_af = math.log(weight.at_origin) + problem.log_f_center
    eps = _origin_offset(N, log_af, min(1.0, M), settings)
    if eps >= r_cap:
        raise ParameterDomainError(f"r_cap={r_cap} is inside the origin layer")
    y0 = origin_expansion(problem, eps)

    def rhs(r, y):
        u, q = y
        fu = math.exp(float(nl.log_f(max(u, 0.0))))
        du = -((abs(q) / r ** (N - 1)) ** (1.0 / (N - 1)))
        return [du, -(r ** (N - 1)) * float(weight(r)) * fu]

    def hits_zero(r, y):
        return y[0]

    sol = _integrate(rhs, hits_zero, (eps, r_cap), y0, tol, settings)
    status = _status(sol)
    radius, u, q = _trajectory(sol, status)

    R = slope = None
    if status == ShotStatus.CROSSED_ZERO:
        R = float(radius[-1])
        slope = (abs(q[-1]) / R ** (N - 1)) ** (1.0 / (N - 1))

    mass = sphere_area(N) * abs(float(q[-1]))
    logger.debug(f"shoot N={N} M={M:g}: {status.value} at r={radius[-1]:.6g}, mass={mass:.6g}")
    return RadialShot(
        problem=problem,
        radius=radius,
        u=u,
        q=q,
        status=status,
        mass=mass,
        R=R,
        slope_at_R=slope,
        tol=tol,
        origin_offset=eps,
        solution=sol.sol,
    )


def rescaled_shoot(
    problem: RadialProblem,
    r_cap: Optional[float] = None,
    tol: float = 1e-9,
    settings: Optional[SolverSettings] = None,
) -> RadialShot:
    """Integrate the blow-up variables v(rho) = u(mu rho) - M until v = -M or rho = r_cap.

    The right-hand side rho^{N-1} a(mu rho) exp(log f(M+v) - log f(M)) never
    forms f(M) itself. The returned R and slope are converted back to physical
    variables (R = mu rho_R may underflow to 0 for very large M); the mass is
    invariant under the rescaling.
    """
    settings = settings or get_config().solver
    r_cap = settings.r_cap_rescaled if r_cap is None else r_cap
    _check_tol(tol, settings)
    if r_cap <= 0:
        raise ParameterDomainError(f"r_cap must be positive, got {r_cap}")

    N, M, nl, weight = problem.N, problem.M, problem.nl, problem.weight
    log_fM = problem.log_f_center
    if not math.isfinite(log_fM):
        raise ParameterDomainError(f"f(M) must be positive for rescaling, got log f(M)={log_fM}")
    log_mu = problem.log_mu
    mu = math.exp(log_mu)
    if mu * r_cap < np.finfo(float).max:
        weight.check_positive(mu * r_cap)

    eps = _origin_offset(N, math.log(weight.at_origin), min(1.0, M), settings)
    if eps >= r_cap:
        raise ParameterDomainError(f"r_cap={r_cap} is inside the origin layer")
    y0 = origin_expansion(problem, eps, rescaled=True)

    def rhs(rho, y):
        v, q = y
        ratio = math.exp(float(nl.log_f(max(M + v, 0.0))) - log_fM)
        dv = -((abs(q) / rho ** (N - 1)) ** (1.0 / (N - 1)))
        return [dv, -(rho ** (N - 1)) * float(weight(mu * rho)) * ratio]

    def hits_zero(rho, y):
        return y[0] + M

    sol = _integrate(rhs, hits_zero, (eps, r_cap), y0, tol, settings)
    status = _status(sol)
    radius, v, q = _trajectory(sol, status)

    R = slope = None
    if status == ShotStatus.CROSSED_ZERO:
        rho_R = float(radius[-1])
        R = mu * rho_R
        log_slope = math.log(abs(q[-1]) / rho_R ** (N - 1)) / (N - 1) - log_mu
        slope = math.exp(log_slope) if log_slope < 709.0 else math.inf

    mass = sphere_area(N) * abs(float(q[-1]))
    logger.debug(
        f"rescaled shoot N={N} M={M:g}: {status.value} at rho={radius[-1]:.6g}, mass={mass:.6g}"
    )
    return RadialShot(
        problem=problem,
        radius=radius,
        u=v,
        q=q,
        status=status,
        mass=mass,
        R=R,
        slope_at_R=slope,
        tol=tol,
        origin_offset=eps,
        rescaled=True,
        log_mu=log_mu,
        solution=sol.sol,
    )


def _forcing(shot: RadialShot) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Vectorized r^{N-1} a f(u) in the shot's own variables."""
    p = shot.problem
    N, M = p.N, p.M
    if shot.rescaled:
        mu, log_fM = math.exp(shot.log_mu), p.log_f_center

        def forcing(rho, v):
            with np.errstate(over="ignore"):
                ratio = np.exp(p.nl.log_f(np.maximum(M + v, 0.0)) - log_fM)
            return rho ** (N - 1) * p.weight(mu * rho) * ratio

        return forcing

    def forcing(r, u):
        return r ** (N - 1) * p.weight(r) * np.exp(p.nl.log_f(np.maximum(u, 0.0)))

    return forcing


def accumulated_forcing(shot: RadialShot) -> np.ndarray:
    """int_0^r s^{N-1} a f(u) ds at every accepted step.

    Accumulated with 8-point Gauss-Legendre quadrature of the dense output on
    each step, seeded with the exact origin-layer contribution -q(eps).
    """
    if shot.solution is None:
        raise ParameterDomainError("Shot carries no dense output")
    r = shot.radius
    half, mid = 0.5 * (r[1:] - r[:-1]), 0.5 * (r[1:] + r[:-1])
    nodes = mid[:, None] + half[:, None] * GAUSS_NODES[None, :]

    u_nodes = shot.solution(nodes.ravel())[0].reshape(nodes.shape)
    pieces = half * (_forcing(shot)(nodes, u_nodes) @ GAUSS_WEIGHTS)
    return -shot.q[0] + np.concatenate(([0.0], np.cumsum(pieces)))


def flux_residuals(shot: RadialShot) -> np.ndarray:
    """Relative residual of  q(r) + int_0^r s^{N-1} a f(u) ds  at every accepted step."""
    return np.abs(shot.q + accumulated_forcing(shot)) / (1.0 + np.abs(shot.q))


def divergence_defect(shot: RadialShot) -> float:
    """Relative defect of  int_B a f(u) = |S^{N-1}| R^{N-1} |u'(R)|^{N-1}.

    The left side is the quadrature of the forcing over the ball of radius R,
    the right side the boundary flux, which is the recorded mass.
    """
    if not shot.crossed:
        raise ParameterDomainError("Divergence identity needs a shot that crossed zero")
    interior = sphere_area(shot.problem.N) * float(accumulated_forcing(shot)[-1])
    return abs(interior - shot.mass) / max(shot.mass, np.finfo(float).tiny)


def flux_identity_holds(shot: RadialShot, settings: Optional[SolverSettings] = None) -> bool:
    """Whether every flux residual is within flux_tolerance_factor * tol."""
    settings = settings or get_config().solver
    worst = float(np.max(flux_residuals(shot)))
    budget = settings.flux_tolerance_factor * shot.tol
    if worst > budget:
        logger.warning(f"Flux residual {worst:.2e} exceeds budget {budget:.2e}")
    return worst <= budget
