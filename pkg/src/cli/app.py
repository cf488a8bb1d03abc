"""Command-line front end: ``nlab <subcommand> [flags]``.

Every subcommand prints a one-line JSON summary on stdout and, with
``--out``, writes its CSV or JSON artifact. Exit status is 0 on success,
1 for domain or argument errors and 2 for numerical failures.

Argument grammars:
    --family  powerlog:tau=1,p=2,alpha=0.5 | expcrit:gamma=1,q=0 |
              exppow:alpha=1.5 | affine:c0=1,c1=0 |
              scaled:c=2,inner=<family spec>
    --weight  const:value=1 | ramp:a0=1,a1=0.5 | table:<csv with columns r,a>
"""

from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence
import argparse
import logging
import sys

import numpy as np

from .. import __version__
from ..blowup import (
    LiouvilleProfile,
    concentration_mass,
    profile_distance,
    rescale,
    subcritical_limit_check,
    subcritical_reference,
    theta_exact,
    theta_quadrature,
)
from ..branch import quantization_probe, sweep
from ..counterexample import (
    BumpTestFunction,
    ZeroTestFunction,
    build_counterexample,
    entropy_identity_check,
    samples,
    truncation_energy,
)
from ..nonlinearity import CriticalityKind, classify, envelope, format_family, parse_family
from ..radial import (
    RadialProblem,
    divergence_defect,
    flux_identity_holds,
    flux_residuals,
    parse_weight,
    rescaled_shoot,
    shoot,
)
from ..radial.weights import ConstantWeight
from ..utils.config import LabConfig, load_config, use_config
from ..utils.errors import ArgumentError, LabError
from ..utils.io import dumps_json, write_csv, write_json
from ..utils.logging import setup_logger

logger = logging.getLogger(__name__)


class LabArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise ArgumentError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="YAML configuration file")
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="stderr log level (default from config)",
    )
    parser.add_argument("--log-file", type=Path, default=None, help="Also log to this file")
    parser.add_argument("--out", type=Path, default=None, help="Artifact path")
    parser.add_argument("--format", choices=["csv", "json"], default=None, help="Artifact format")


def build_parser() -> argparse.ArgumentParser:
    parser = LabArgumentParser(
        prog="nlab",
        description="Radial N-Laplacian lab: growth classification, shooting, branches, "
        "blow-up and the unbounded entropy counterexample",
        epilog=__doc__.split("Argument grammars:", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="<subcommand>")
    sub.required = True

    p = sub.add_parser("classify", help="Criticality of a nonlinearity")
    p.add_argument("--family", required=True)

    p = sub.add_parser("envelope", help="Growth envelope of a non-supercritical nonlinearity")
    p.add_argument("--family", required=True)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--t-min", type=float, default=0.0)

    p = sub.add_parser("shoot", help="Single radial shot from u(0) = M")
    _add_problem(p)
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--r-cap", type=float, default=None)
    p.add_argument("--rescaled", action="store_true", help="Integrate the blow-up variables")

    p = sub.add_parser("branch", help="Sweep M -> (R, mass) and refine unit-ball solutions")
    _add_problem(p)
    _add_grid(p)
    p.add_argument("--r-cap", type=float, default=None)
    p.add_argument("--rescaled-from", type=float, default=None)
    p.add_argument("--target-radius", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("rescale", help="Blow-up rescaling compared with the limit profile")
    _add_problem(p)
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--r-cmp", type=float, default=10.0)
    p.add_argument("--beta", type=float, default=None, help="Override the classified beta")

    p = sub.add_parser("theta", help="Liouville mass: closed form against quadrature")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)

    p = sub.add_parser("quantize", help="Limit mass along a critical branch")
    _add_problem(p)
    _add_grid(p)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("counterexample", help="Unbounded entropy solution with bounded weight")
    _add_counterexample(p)

    p = sub.add_parser("entropy-check", help="Entropy identity and truncation energy at level k")
    _add_counterexample(p)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--bump-amplitude", type=float, default=None)
    p.add_argument("--bump-support", type=float, default=None, help="Bump radius (default rho/2)")

    for subparser in sub.choices.values():
        _add_common(subparser)
    return parser


def _add_problem(p: argparse.ArgumentParser) -> None:
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--weight", default=None)
    p.add_argument("--tol", type=float, default=1e-9)


def _add_grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m-min", type=float, required=True)
    p.add_argument("--m-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True, help="Number of heights")


def _add_counterexample(p: argparse.ArgumentParser) -> None:
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--rho", type=float, default=1e-3)


def _grid(args: argparse.Namespace) -> np.ndarray:
    if args.steps < 2 or not args.m_max > args.m_min:
        raise ArgumentError("Need --steps >= 2 and --m-max > --m-min")
    return np.linspace(args.m_min, args.m_max, args.steps)


def _problem(args: argparse.Namespace) -> RadialProblem:
    weight = parse_weight(args.weight) if args.weight else ConstantWeight()
    return RadialProblem(N=args.N, nl=parse_family(args.family), weight=weight, M=args.M)


def _emit(args: argparse.Namespace, default_format: str, table: Optional[Dict[str, Any]], payload: Any) -> None:
    if args.out is None:
        return
    fmt = args.format or default_format
    if fmt == "csv":
        if table is None:
            raise ArgumentError(f"'{args.command}' has no CSV artifact; use --format json")
        write_csv(table, args.out)
    else:
        write_json(payload, args.out)


def cmd_classify(args: argparse.Namespace, config: LabConfig) -> Dict[str, Any]:
    crit = classify(parse_family(args.family), settings=config.classify)
    _emit(args, "json", None, crit.to_dict())
    return {"criticality": crit.kind.value, "beta": crit.beta, "rule": crit.rule}


def cmd_envelope(args: argparse.Namespace, config: LabConfig) -> Dict[str, Any]:
    env = envelope(parse_family(args.family), args.epsilon, args.t_min, config.envelope, config.classify)
    _emit(args, "json", None, env.to_dict())
    return env.to_dict()


def cmd_shoot(args: argparse.Namespace, config: LabConfig) -> Dict[str, Any]:
    problem = _problem(args)
    if args.rescaled:
        shot = rescaled_shoot(problem, args.r_cap, args.tol, config.solver)
    else:
        shot = shoot(problem, args.r_cap, args.tol, config.solver)

    summary = shot.summary()
    summary["max_flux_residual"] = float(np.max(flux_residuals(shot)))
    summary["flux_identity_ok"] = flux_identity_holds(shot, config.solver)
    if shot.crossed:
        summary["divergence_defect"] = divergence_defect(shot)
    _emit(args, "csv", shot.columns(), {**summary, "profile": shot.columns()})
    return summary


def cmd_branch(args: argparse.Namespace, config: LabConfig) -> Dict[str, Any]:
    diagram = sweep(
        args.N,
        parse_family(args.family),
        _grid(args),
        tol=args.tol,
        weight=parse_weight(args.weight) if args.weight else None,
        r_cap=args.r_cap,
        rescaled_from=args.rescaled_from,
        target_radius=args.target_radius,
        workers=args.workers,
        config=config,
    )
    summary = diagram.summary()
    summary["solutions"] = diagram.solutions_payload()

    if args.out is not None:
        fmt = args.format or "csv"
        if fmt == "csv":
            write_csv(diagram.columns(), args.out)
            stem = args.out.with_suffix("")
            write_json(diagram.solutions_payload(), f"{stem}.solutions.json")
            write_json(summary["bound_certificate"], f"{stem}.certificate.json")
        else:
            write_json({**summary, "diagram": {**diagram.columns(), "rescaled": diagram.rescaled}}, args.out)
    return summary


def cmd_rescale(args: argparse.Namespace, config: LabConfig) -> Dict[str, Any]:
    problem = _problem(args)
    shot = shoot(problem, None, args.tol, config.solver)
    rp = rescale(shot)
    crit = classify(problem.nl, settings=config.classify)

    summary: Dict[str, Any] = {
        "N": problem.N,
        "family": format_family(problem.nl),
        "M": problem.M,
        "criticality": crit.kind.value,
        "log_mu": rp.log_mu,
        "window": rp.window(args.r_cmp),
        "concentration_mass": concentration_mass(rp, args.r_cmp),
    }
    # Supercritical growth without --beta has no limit profile
    reference = np.full_like(rp.rho, np.nan)
    if crit.kind == CriticalityKind.CRITICAL or args.beta is not None:
        beta = crit.beta if args.beta is None else args.beta
        lp = LiouvilleProfile(problem.N, beta)
        gap_v, gap_vprime = profile_distance(rp, lp, args.r_cmp)
        summary.update(beta=beta, sup_gap_v=gap_v, sup_gap_vprime=gap_vprime)
        reference = lp.value(rp.rho)
    elif crit.kind == CriticalityKind.SUBCRITICAL:
        summary["sup_gap_v"] = subcritical_limit_check(rp, problem.N, args.r_cmp)
        reference = subcritical_reference(problem.N, rp.rho, problem.weight.at_origin)
    table = rp.columns(reference)
    _emit(args, "csv", table, {**summary, "profile": table, "vprime": rp.vprime})
    return summary


def cmd_theta(args: argparse.Namespace, config: LabConfig) -> Dict[str, Any]:
    exact = theta_exact(args.N, args.beta)
    numeric = theta_quadrature(LiouvilleProfile(args.N, args.beta), settings=config.blowup)
    summary = {
        "N": args.N,
        "beta": args.beta,
        "theta_exact": exact,
        "theta_quadrature": numeric,
        "rel_err": abs(numeric - exact) / exact,
    }
    _emit(args, "json", None, summary)
    return summary


def cmd_quantize(args: argparse.Namespace, config: LabConfig) -> Dict[str, Any]:
    diagram = sweep(
        args.N,
        parse_family(args.family),
        _grid(args),
        tol=args.tol,
        weight=parse_weight(args.weight) if args.weight else None,
        workers=args.workers,
        config=config,
    )
    report = quantization_probe(diagram, args.beta)
    summary = {"N": args.N, "family": format_family(diagram.nl), **report.to_dict()}
    _emit(args, "json", None, summary)
    return summary


def cmd_counterexample(args: argparse.Namespace, config: LabConfig) -> Dict[str, Any]:
    ce = build_counterexample(args.N, args.alpha, args.rho, config.counterexample)
    table = samples(ce, config.counterexample).columns()
    _emit(args, "csv", table, {**ce.to_dict(), "samples": table})
    return ce.to_dict()


def cmd_entropy_check(args: argparse.Namespace, config: LabConfig) -> Dict[str, Any]:
    ce = build_counterexample(args.N, args.alpha, args.rho, config.counterexample)
    if args.bump_amplitude is None:
        phi = ZeroTestFunction()
    else:
        support = args.bump_support if args.bump_support is not None else ce.rho / 2
        phi = BumpTestFunction(amplitude=args.bump_amplitude, support=support)
    check = entropy_identity_check(ce, phi, args.k, config.counterexample)
    summary = {
        **ce.to_dict(),
        **check.to_dict(),
        "truncation_energy": truncation_energy(ce, args.k, config.counterexample),
    }
    _emit(args, "json", None, summary)
    return summary


COMMANDS: Dict[str, Callable[[argparse.Namespace, LabConfig], Dict[str, Any]]] = {
    "classify": cmd_classify,
    "envelope": cmd_envelope,
    "shoot": cmd_shoot,
    "branch": cmd_branch,
    "rescale": cmd_rescale,
    "theta": cmd_theta,
    "quantize": cmd_quantize,
    "counterexample": cmd_counterexample,
    "entropy-check": cmd_entropy_check,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run the subcommand and return the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except ArgumentError as e:
        print(f"nlab: error: {e}", file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    try:
        config = load_config(args.config)
        setup_logger(args.log_level or config.logging.level, args.log_file or config.logging.log_file)
        use_config(config)
        summary = COMMANDS[args.command](args, config)
    except LabError as e:
        logger.error(f"{args.command} failed: {e}")
        return e.exit_code

    sys.stdout.write(dumps_json(summary, compact=True).decode() + "\n")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    return run(argv)
