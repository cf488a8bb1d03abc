"""Sweep of the radial branch M -> (R(M), mass(M)).

Every grid point is an independent shot, so sweeps run in a process pool
when more than one worker is configured. Sign changes of R(M) - target
are refined by bisection into unit-ball solutions.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Set, Tuple
import logging
import math

import numpy as np
from tqdm import tqdm

from ..nonlinearity import (
    Criticality,
    CriticalityKind,
    Nonlinearity,
    classify,
    format_family,
)
from ..radial import ConstantWeight, RadialProblem, RadialWeight, ShotStatus, rescaled_shoot, shoot
from ..utils.config import BranchSettings, LabConfig, SolverSettings, get_config
from ..utils.errors import ArgumentError, InconclusiveClassificationError

logger = logging.getLogger(__name__)


class ShotTask(NamedTuple):
    problem: RadialProblem
    tol: float
    r_cap: Optional[float]
    rescaled: bool
    settings: SolverSettings


class ShotOutcome(NamedTuple):
    M: float
    R: float
    mass: float
    status: ShotStatus
    rescaled: bool


def run_shot(task: ShotTask) -> ShotOutcome:
    """Worker entry point: one shot reduced to its branch data."""
    if task.rescaled:
        shot = rescaled_shoot(task.problem, task.r_cap, task.tol, task.settings)
    else:
        shot = shoot(task.problem, task.r_cap, task.tol, task.settings)
    R = shot.R if shot.R is not None else math.nan
    return ShotOutcome(task.problem.M, R, shot.mass, shot.status, shot.rescaled)


@dataclass(frozen=True)
class UnitBallSolution:
    M: float
    R: float
    mass: float
    residual: float


@dataclass(frozen=True)
class BoundCertificate:
    """Above M_threshold every sampled solution has R < target, with R(M) decreasing."""

    M_threshold: float
    R_max_beyond: float
    points: int


@dataclass
class BranchDiagram:
    N: int
    nl: Nonlinearity
    weight: RadialWeight
    M_grid: np.ndarray
    R_of_M: np.ndarray
    mass_of_M: np.ndarray
    statuses: List[ShotStatus]
    rescaled: np.ndarray
    tol: float
    target_radius: float = 1.0
    unit_ball_solutions: List[UnitBallSolution] = field(default_factory=list)
    bound_certificate: Optional[BoundCertificate] = None
    criticality: Optional[Criticality] = None
    gaps: List[Tuple[float, str]] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def mass_budget(self) -> float:
        finite = self.mass_of_M[np.isfinite(self.mass_of_M)]
        return float(np.max(finite)) if finite.size else math.nan

    def columns(self) -> Dict[str, Any]:
        return {
            "M": self.M_grid,
            "R": self.R_of_M,
            "mass": self.mass_of_M,
            "status": [s.value for s in self.statuses],
        }

    def summary(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "family": format_family(self.nl),
            "weight": self.weight.describe(),
            "points": int(self.M_grid.size),
            "rescaled_points": int(np.count_nonzero(self.rescaled)),
            "unit_ball_solutions": len(self.unit_ball_solutions),
            "mass_budget": self.mass_budget,
            "bound_certificate": (
                None
                if self.bound_certificate is None
                else {
                    "M_threshold": self.bound_certificate.M_threshold,
                    "R_max_beyond": self.bound_certificate.R_max_beyond,
                    "points": self.bound_certificate.points,
                }
            ),
            "criticality": None if self.criticality is None else self.criticality.kind.value,
            "beta": None if self.criticality is None else self.criticality.beta,
            "gaps": len(self.gaps),
            "warnings": list(self.warnings),
        }

    def solutions_payload(self) -> List[Dict[str, float]]:
        return [
            {"M": s.M, "R": s.R, "mass": s.mass, "residual": s.residual}
            for s in self.unit_ball_solutions
        ]


def _validate_grid(M_grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(M_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ArgumentError("M grid needs at least two heights")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0) or not np.all(np.isfinite(grid)):
        raise ArgumentError("M grid must be positive, finite and strictly increasing")
    return grid


def sweep(
    N: int,
    nl: Nonlinearity,
    M_grid: Sequence[float],
    tol: float = 1e-9,
    weight: Optional[RadialWeight] = None,
    r_cap: Optional[float] = None,
    rescaled_from: Optional[float] = None,
    target_radius: float = 1.0,
    workers: Optional[int] = None,
    show_progress: Optional[bool] = None,
    config: Optional[LabConfig] = None,
) -> BranchDiagram:
    """Shoot every height in M_grid and assemble the branch diagram.

    Args:
        N: Dimension (>= 2)
        nl: Nonlinearity
        M_grid: Strictly increasing positive heights
        tol: Shooting accuracy
        weight: Radial weight (constant 1 by default)
        r_cap: Physical radius cap for physical shots
        rescaled_from: Heights at or above this use rescaled shots
        target_radius: Ball radius whose solutions are refined
        workers: Process-pool size (1 runs serially)
        show_progress: Display a tqdm progress bar

    Returns:
        BranchDiagram with refined unit-ball solutions and, for Subcritical
        or Critical growth supported by the tail, a bound certificate

    Raises:
        ArgumentError: Invalid grid
    """
    config = config or get_config()
    weight = weight or ConstantWeight()
    grid = _validate_grid(M_grid)
    workers = config.performance.workers if workers is None else workers
    show_progress = config.performance.show_progress if show_progress is None else show_progress

    def task_for(M: float) -> ShotTask:
        problem = RadialProblem(N=N, nl=nl, weight=weight, M=float(M))
        rescaled = (rescaled_from is not None and M >= rescaled_from) or (
            problem.log_f_center > config.solver.log_f_cap
        )
        cap = r_cap
        if rescaled and r_cap is not None:
            cap = r_cap * math.exp(-problem.log_mu)
        return ShotTask(problem, tol, cap, rescaled, config.solver)

    tasks = [task_for(M) for M in grid]
    logger.info(f"Sweeping {len(tasks)} heights for {format_family(nl)} in N={N}")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(
                tqdm(
                    pool.map(run_shot, tasks, chunksize=max(1, len(tasks) // (4 * workers))),
                    total=len(tasks),
                    desc="Shooting",
                    disable=not show_progress,
                )
            )
    else:
        outcomes = [run_shot(t) for t in tqdm(tasks, desc="Shooting", disable=not show_progress)]

    diagram = BranchDiagram(
        N=N,
        nl=nl,
        weight=weight,
        M_grid=grid,
        R_of_M=np.array([o.R for o in outcomes]),
        mass_of_M=np.array([o.mass for o in outcomes]),
        statuses=[o.status for o in outcomes],
        rescaled=np.array([o.rescaled for o in outcomes]),
        tol=tol,
        target_radius=target_radius,
    )

    for o in outcomes:
        if o.status != ShotStatus.CROSSED_ZERO:
            diagram.gaps.append((o.M, o.status.value))
    if diagram.gaps:
        diagram.warnings.append(f"{len(diagram.gaps)} heights did not cross zero")

    _assess_growth(diagram, config)
    _refine_unit_ball(diagram, task_for, config.branch)
    if diagram.criticality is not None and diagram.criticality.kind in (
        CriticalityKind.SUBCRITICAL,
        CriticalityKind.CRITICAL,
    ):
        diagram.bound_certificate = _bound_certificate(diagram, config.branch)
    else:
        diagram.warnings.append("No bound certificate without a Subcritical or Critical verdict")

    logger.info(
        f"Branch done: {len(diagram.unit_ball_solutions)} solutions at R={target_radius}, "
        f"mass budget {diagram.mass_budget:.6g}"
    )
    for message in diagram.warnings:
        logger.warning(message)
    return diagram


def _assess_growth(diagram: BranchDiagram, config: LabConfig) -> None:
    try:
        diagram.criticality = classify(diagram.nl, settings=config.classify)
    except InconclusiveClassificationError as e:
        diagram.warnings.append(f"Criticality inconclusive: {e}")
        return
    if diagram.criticality.kind == CriticalityKind.SUPERCRITICAL:
        diagram.warnings.append("Supercritical growth: a priori bounds are not expected")
    if diagram.nl.superlinearity_exponent_for(diagram.N) is None:
        diagram.warnings.append(f"Nonlinearity is not superlinear in dimension {diagram.N}")


def _refine_unit_ball(diagram: BranchDiagram, task_for, settings: BranchSettings) -> None:
    target = diagram.target_radius
    R, grid = diagram.R_of_M, diagram.M_grid
    gap = R - target

    def radius_gap(M: float) -> Tuple[float, float]:
        outcome = run_shot(task_for(M))
        if outcome.status != ShotStatus.CROSSED_ZERO:
            return math.nan, outcome.mass
        return outcome.R - target, outcome.mass

    exact: Set[int] = set()

    def record_exact(j: int) -> None:
        # A grid point on a root closes both adjacent brackets
        if j not in exact:
            exact.add(j)
            diagram.unit_ball_solutions.append(
                UnitBallSolution(float(grid[j]), float(R[j]), float(diagram.mass_of_M[j]), 0.0)
            )

    for i in range(grid.size - 1):
        g_lo, g_hi = gap[i], gap[i + 1]
        if not (np.isfinite(g_lo) and np.isfinite(g_hi)):
            continue
        if g_lo == 0 or g_hi == 0:
            for j in (i, i + 1):
                if gap[j] == 0:
                    record_exact(j)
            continue
        if g_lo * g_hi > 0:
            continue

        lo, hi = float(grid[i]), float(grid[i + 1])
        best = (abs(g_lo), lo, R[i], diagram.mass_of_M[i])
        for _ in range(settings.max_bisections):
            mid = 0.5 * (lo + hi)
            g_mid, mass = radius_gap(mid)
            if not np.isfinite(g_mid):
                diagram.warnings.append(f"Bisection near M={mid:.6g} hit a non-crossing shot")
                break
            if abs(g_mid) < best[0]:
                best = (abs(g_mid), mid, g_mid + target, mass)
            if abs(g_mid) <= settings.radius_tolerance:
                break
            if (g_mid > 0) == (g_lo > 0):
                lo, g_lo = mid, g_mid
            else:
                hi = mid

        residual, M_star, R_star, mass_star = best
        if residual <= settings.radius_tolerance:
            diagram.unit_ball_solutions.append(
                UnitBallSolution(float(M_star), float(R_star), float(mass_star), float(residual))
            )
            logger.debug(f"Unit-ball solution M*={M_star:.10g} (|R-1|={residual:.2e})")
        else:
            diagram.warnings.append(
                f"Root in [{grid[i]:.6g}, {grid[i + 1]:.6g}] not refined below {residual:.2e}"
            )


def _bound_certificate(
    diagram: BranchDiagram, settings: BranchSettings
) -> Optional[BoundCertificate]:
    R = diagram.R_of_M
    j = R.size
    # Longest tail with R < target and R non-increasing
    while j > 0 and np.isfinite(R[j - 1]) and R[j - 1] < diagram.target_radius:
        if j < R.size and R[j - 1] < R[j]:
            break
        j -= 1
    points = R.size - j
    if points < settings.min_certificate_points:
        return None
    return BoundCertificate(float(diagram.M_grid[j]), float(R[j]), points)
