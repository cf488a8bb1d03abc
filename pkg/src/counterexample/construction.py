"""Explicit unbounded entropy solution with a bounded weight.

For f(t) = e^{t^alpha}, 1 < alpha < N/(N-1), the radial function

    w(r) = N^{1/alpha} (u(r) - beta/alpha),   u = phi(l(r))^{1/alpha},
    phi(t) = t + beta t^gamma - delta log t,   l(r) = log(1/r),

vanishes on the sphere of radius rho (beta = beta(rho) is solved for), is
unbounded at the origin, and satisfies -Delta_N w = a e^{w^alpha} with a
weight a that stays bounded and tends to a positive constant at 0.

Every quantity is evaluated in the logarithmic variable t = l(r), where the
origin is t -> inf and all exponentials are combined in log space.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Union
import logging
import math

import numpy as np
from scipy.optimize import brentq

from ..utils.config import CounterexampleSettings, get_config
from ..utils.errors import ParameterDomainError, RegimeError, ToleranceError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _validate(N: int, alpha: float) -> None:
    if N < 2:
        raise ParameterDomainError(f"N must be >= 2, got {N}")
    upper = N / (N - 1)
    if not 1.0 < alpha < upper:
        raise ParameterDomainError(f"alpha must lie in (1, {upper:g}) for N={N}, got {alpha}")


def delta_of(N: int, alpha: float) -> float:
    return ((alpha - 1.0) * N + 1.0) / (alpha * N)


def gamma_of(alpha: float) -> float:
    return (alpha - 1.0) / alpha


def a_limit(N: int, alpha: float) -> float:
    """a(0+) = N^{(N-1)/alpha} (N-1)(alpha-1) / alpha^N."""
    _validate(N, alpha)
    return N ** ((N - 1) / alpha) * (N - 1) * (alpha - 1.0) / alpha**N


def _phi(t, beta, gamma, delta):
    return t + beta * t**gamma - delta * np.log(t)


def beta_of_rho(
    N: int, alpha: float, rho: float, settings: Optional[CounterexampleSettings] = None
) -> float:
    """Solve phi_beta(l(rho))^{1/alpha} = beta/alpha for beta > 0.

    g(beta) is concave with g(0) > 0, so the positive root is unique. The
    upper bracket starts at 4 alpha l(rho)^{1/alpha} and doubles until g < 0.

    Raises:
        ParameterDomainError: alpha out of range or rho outside (0, 1)
        RegimeError: No sign change found
    """
    settings = settings or get_config().counterexample
    _validate(N, alpha)
    if not 0.0 < rho < 1.0:
        raise ParameterDomainError(f"rho must lie in (0, 1), got {rho}")
    L = -math.log(rho)
    gamma, delta = gamma_of(alpha), delta_of(N, alpha)

    def g(beta: float) -> float:
        phi = _phi(L, beta, gamma, delta)
        if phi <= 0:
            return math.nan
        return phi ** (1.0 / alpha) - beta / alpha

    if not g(0.0) > 0:
        raise RegimeError(f"phi(l(rho)) is not positive at rho={rho:g}")

    beta_hi = 4.0 * alpha * L ** (1.0 / alpha)
    for _ in range(settings.bracket_doublings):
        if g(beta_hi) < 0:
            break
        beta_hi *= 2.0
    else:
        raise RegimeError(f"No sign change of g up to beta={beta_hi:.3g} (rho={rho:g} too large)")

    beta = brentq(g, 0.0, beta_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    if abs(g(beta)) > settings.root_tolerance * max(1.0, beta):
        raise ToleranceError(f"beta(rho) residual {g(beta):.2e}", estimate=beta)
    return beta


@dataclass(frozen=True)
class CounterexampleSamples:
    """Columns of the counterexample CSV on a geometric grid in t."""

    l: np.ndarray
    r: np.ndarray
    u_beta: np.ndarray
    w: np.ndarray
    a: np.ndarray
    log_neg_DeltaN_u: np.ndarray
    w_alpha_residual: np.ndarray

    def columns(self) -> Dict[str, np.ndarray]:
        return {
            "l": self.l,
            "r": self.r,
            "u_beta": self.u_beta,
            "w": self.w,
            "a": self.a,
            "log_neg_DeltaN_u": self.log_neg_DeltaN_u,
            "w_alpha_residual": self.w_alpha_residual,
        }


@dataclass(frozen=True)
class CounterexampleInstance:
    N: int
    alpha: float
    rho: float
    beta_rho: float
    rho_shrink_count: int = 0

    def __post_init__(self):
        _validate(self.N, self.alpha)

    @property
    def delta(self) -> float:
        return delta_of(self.N, self.alpha)

    @property
    def gamma_exp(self) -> float:
        return gamma_of(self.alpha)

    @property
    def l_rho(self) -> float:
        return -math.log(self.rho)

    @property
    def a_limit(self) -> float:
        return a_limit(self.N, self.alpha)

    @property
    def beta_ratio(self) -> float:
        """beta / l(rho)^{1/alpha}; approaches alpha as rho -> 0."""
        return self.beta_rho / self.l_rho ** (1.0 / self.alpha)

    # phi and its t-derivatives

    def phi(self, t: ArrayLike) -> ArrayLike:
        return _phi(np.asarray(t, dtype=float), self.beta_rho, self.gamma_exp, self.delta)

    def dphi(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        return 1.0 + self.beta_rho * self.gamma_exp * t ** (self.gamma_exp - 1.0) - self.delta / t

    def ddphi(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        g = self.gamma_exp
        return self.beta_rho * g * (g - 1.0) * t ** (g - 2.0) + self.delta / t**2

    def bracket(self, t: ArrayLike) -> ArrayLike:
        """(alpha-1)/alpha phi'^2/phi - phi''; positive exactly where -Delta_N u > 0."""
        return self.gamma_exp * self.dphi(t) ** 2 / self.phi(t) - self.ddphi(t)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "alpha": self.alpha,
            "rho": self.rho,
            "beta_rho": self.beta_rho,
            "delta": self.delta,
            "gamma": self.gamma_exp,
            "a_limit": self.a_limit,
            "rho_shrink_count": self.rho_shrink_count,
            "beta_ratio": self.beta_ratio,
        }


def u_at_log(ce: CounterexampleInstance, t: ArrayLike) -> ArrayLike:
    return ce.phi(t) ** (1.0 / ce.alpha)


def w_at_log(ce: CounterexampleInstance, t: ArrayLike) -> ArrayLike:
    return ce.N ** (1.0 / ce.alpha) * (u_at_log(ce, t) - ce.beta_rho / ce.alpha)


def w_alpha_at_log(ce: CounterexampleInstance, t: ArrayLike) -> ArrayLike:
    """w^alpha = N (u - beta/alpha)^alpha."""
    base = np.maximum(u_at_log(ce, t) - ce.beta_rho / ce.alpha, 0.0)
    return ce.N * base**ce.alpha


def w_alpha_residual_at_log(ce: CounterexampleInstance, t: ArrayLike) -> ArrayLike:
    """w^alpha - (N t - N delta log t), which tends to 0 as t -> inf."""
    t = np.asarray(t, dtype=float)
    return w_alpha_at_log(ce, t) - (ce.N * t - ce.N * ce.delta * np.log(t))


def flux_speed_at_log(ce: CounterexampleInstance, t: ArrayLike) -> ArrayLike:
    """W(t) = r |w'(r)| = dw/dt = N^{1/alpha} phi' u^{1-alpha} / alpha."""
    t = np.asarray(t, dtype=float)
    return (
        ce.N ** (1.0 / ce.alpha)
        * ce.dphi(t)
        * ce.phi(t) ** ((1.0 - ce.alpha) / ce.alpha)
        / ce.alpha
    )


def flux_density_at_log(ce: CounterexampleInstance, t: ArrayLike) -> ArrayLike:
    """G(t) = r^N (-Delta_N w) = -d(W^{N-1})/dt."""
    t = np.asarray(t, dtype=float)
    N, alpha = ce.N, ce.alpha
    return (
        N ** ((N - 1) / alpha)
        * (N - 1)
        / alpha ** (N - 1)
        * ce.phi(t) ** ((1.0 - alpha) * (N - 1) / alpha)
        * ce.dphi(t) ** (N - 2)
        * ce.bracket(t)
    )


def log_neg_laplacian_at_log(ce: CounterexampleInstance, t: ArrayLike) -> ArrayLike:
    """log(-Delta_N u) at r = e^{-t}; nan where -Delta_N u <= 0."""
    t = np.asarray(t, dtype=float)
    N, alpha = ce.N, ce.alpha
    with np.errstate(invalid="ignore", divide="ignore"):
        return (
            math.log(N - 1)
            - (N - 1) * math.log(alpha)
            + N * t
            + (1.0 - alpha) * (N - 1) / alpha * np.log(ce.phi(t))
            + (N - 2) * np.log(ce.dphi(t))
            + np.log(ce.bracket(t))
        )


def log_a_at_log(ce: CounterexampleInstance, t: ArrayLike) -> ArrayLike:
    """log a = ((N-1)/alpha) log N + log(-Delta_N u) - w^alpha."""
    scale = (ce.N - 1) / ce.alpha * math.log(ce.N)
    return scale + log_neg_laplacian_at_log(ce, t) - w_alpha_at_log(ce, t)


def a_at_log(ce: CounterexampleInstance, t: ArrayLike) -> ArrayLike:
    with np.errstate(over="ignore"):
        return np.exp(log_a_at_log(ce, t))


def pde_residual_at_log(ce: CounterexampleInstance, t: ArrayLike) -> ArrayLike:
    """log(a e^{w^alpha}) - log(N^{(N-1)/alpha} (-Delta_N u)); zero up to round-off."""
    scale = (ce.N - 1) / ce.alpha * math.log(ce.N)
    return (log_a_at_log(ce, t) + w_alpha_at_log(ce, t)) - (
        scale + log_neg_laplacian_at_log(ce, t)
    )


def _log_of_radius(ce: CounterexampleInstance, r: ArrayLike, open_right: bool) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ParameterDomainError("Counterexample is unbounded at r = 0; evaluate at r > 0")
    beyond = r >= ce.rho if open_right else r > ce.rho
    if np.any(beyond):
        raise ParameterDomainError(f"r must lie in (0, {ce.rho:g}{')' if open_right else ']'}")
    return -np.log(r)


def w_eval(ce: CounterexampleInstance, r: ArrayLike) -> ArrayLike:
    """w(r) for 0 < r <= rho."""
    out = w_at_log(ce, _log_of_radius(ce, r, open_right=False))
    return out[()] if np.ndim(out) == 0 else out


def w_prime(ce: CounterexampleInstance, r: ArrayLike) -> ArrayLike:
    """w'(r) = -W(l(r)) / r."""
    r = np.asarray(r, dtype=float)
    out = -flux_speed_at_log(ce, _log_of_radius(ce, r, open_right=False)) / r
    return out[()] if np.ndim(out) == 0 else out


def a_eval(ce: CounterexampleInstance, r: ArrayLike) -> ArrayLike:
    """Weight a(r) for 0 < r < rho.

    Raises:
        RegimeError: If -Delta_N u <= 0 at some r
    """
    t = _log_of_radius(ce, r, open_right=True)
    if np.any(ce.bracket(t) <= 0):
        raise RegimeError("-Delta_N u is not positive here; rho is above the valid regime")
    out = a_at_log(ce, t)
    return out[()] if np.ndim(out) == 0 else out


def sample_grid(ce: CounterexampleInstance, settings: CounterexampleSettings) -> np.ndarray:
    return np.geomspace(ce.l_rho, settings.t_max, settings.sample_points)


def samples(
    ce: CounterexampleInstance, settings: Optional[CounterexampleSettings] = None
) -> CounterexampleSamples:
    """Evaluate the construction on a geometric grid from t = l(rho) to t_max."""
    settings = settings or get_config().counterexample
    t = sample_grid(ce, settings)
    with np.errstate(under="ignore"):
        r = np.exp(-t)
    return CounterexampleSamples(
        l=t,
        r=r,
        u_beta=u_at_log(ce, t),
        w=np.maximum(w_at_log(ce, t), 0.0),
        a=a_at_log(ce, t),
        log_neg_DeltaN_u=log_neg_laplacian_at_log(ce, t),
        w_alpha_residual=w_alpha_residual_at_log(ce, t),
    )


def _regime_holds(ce: CounterexampleInstance, t: np.ndarray) -> bool:
    return bool(np.all(ce.phi(t) > 0) and np.all(ce.dphi(t) > 0) and np.all(ce.bracket(t) > 0))


def build_counterexample(
    N: int,
    alpha: float,
    rho: float,
    settings: Optional[CounterexampleSettings] = None,
) -> CounterexampleInstance:
    """Construct the instance, shrinking rho until -Delta_N u > 0 on the sample grid.

    Raises:
        ParameterDomainError: alpha outside (1, N/(N-1)) or rho outside (0, 1)
        RegimeError: The regime check still fails after max_shrinks shrinks
    """
    settings = settings or get_config().counterexample
    _validate(N, alpha)
    if not 0.0 < rho < 1.0:
        raise ParameterDomainError(f"rho must lie in (0, 1), got {rho}")

    current = rho
    for shrinks in range(settings.max_shrinks + 1):
        try:
            beta = beta_of_rho(N, alpha, current, settings)
        except RegimeError as e:
            logger.info(f"rho={current:g}: {e}")
        else:
            ce = CounterexampleInstance(N, alpha, current, beta, shrinks)
            if _regime_holds(ce, sample_grid(ce, settings)):
                logger.info(
                    f"Counterexample N={N} alpha={alpha:g}: rho={current:g}, "
                    f"beta={beta:.10g}, a(0+)={ce.a_limit:.6g}"
                )
                return ce
            logger.info(f"rho={current:g}: -Delta_N u changes sign on the grid, shrinking")
        current /= settings.shrink_factor

    raise RegimeError(
        f"No valid rho found after {settings.max_shrinks} shrinks starting from {rho:g}"
    )


def level_crossing(ce: CounterexampleInstance, level: float, settings: CounterexampleSettings) -> float:
    """The t > l(rho) where w(t) = level (w is increasing in t)."""
    if level <= 0:
        return ce.l_rho
    lo, hi = ce.l_rho, 2.0 * ce.l_rho
    for _ in range(settings.bracket_doublings):
        if w_at_log(ce, hi) >= level:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ToleranceError(f"Level {level} not reached by t={hi:.3g}")
    return brentq(lambda t: float(w_at_log(ce, t)) - level, lo, hi, xtol=1e-13, rtol=1e-15)