"""Tests for branch sweeps and mass quantization."""

import math
import sys

import numpy as np
import pytest

from src.branch import BranchDiagram, quantization_probe, sweep
from src.branch.sweep import _refine_unit_ball
from src.nonlinearity import Affine, CriticalityKind, ExpCritical, PowerLog
from src.radial import ConstantWeight, RadialProblem, ShotStatus, shoot
from src.utils.config import BranchSettings
from src.utils.errors import ArgumentError, InconclusiveClassificationError, NotApplicableError

# Heights of the two unit-ball solutions of -Delta u = e^u in the plane
GELFAND_ROOTS = (
    math.log(8.0 * (3.0 - 2.0 * math.sqrt(2.0))),
    math.log(8.0 * (3.0 + 2.0 * math.sqrt(2.0))),
)


@pytest.fixture(scope="module")
def gelfand_branch():
    return sweep(2, ExpCritical(gamma=1.0, q=0.0), np.linspace(0.1, 12.0, 60), tol=1e-9)


class TestGelfandBranch:
    def test_two_unit_ball_solutions(self, gelfand_branch):
        found = [s.M for s in gelfand_branch.unit_ball_solutions]
        assert len(found) == 2
        assert found[0] == pytest.approx(GELFAND_ROOTS[0], abs=1e-4)
        assert found[1] == pytest.approx(GELFAND_ROOTS[1], abs=1e-4)
        for solution in gelfand_branch.unit_ball_solutions:
            assert solution.residual <= 1e-6
            assert solution.R == pytest.approx(1.0, abs=1e-6)

    def test_mass_stays_below_liouville_mass(self, gelfand_branch):
        assert gelfand_branch.mass_budget < 8.0 * math.pi
        assert np.all(np.diff(gelfand_branch.mass_of_M) > 0)

    def test_bound_certificate(self, gelfand_branch):
        certificate = gelfand_branch.bound_certificate
        assert certificate is not None
        assert certificate.M_threshold > GELFAND_ROOTS[1]
        assert certificate.R_max_beyond < 1.0
        assert certificate.points >= 2

    def test_every_shot_crossed(self, gelfand_branch):
        assert all(s == ShotStatus.CROSSED_ZERO for s in gelfand_branch.statuses)
        assert gelfand_branch.gaps == []

    def test_criticality_recorded(self, gelfand_branch):
        assert gelfand_branch.criticality.kind == CriticalityKind.CRITICAL
        assert gelfand_branch.criticality.beta == pytest.approx(1.0)

    def test_summary_and_columns(self, gelfand_branch):
        summary = gelfand_branch.summary()
        assert summary["unit_ball_solutions"] == 2
        assert summary["criticality"] == "Critical"
        assert summary["rescaled_points"] == 0
        columns = gelfand_branch.columns()
        assert list(columns) == ["M", "R", "mass", "status"]
        assert len(columns["status"]) == 60
        assert len(gelfand_branch.solutions_payload()) == 2

    def test_roots_hold_at_tighter_tolerance(self, gelfand_branch):
        for solution in gelfand_branch.unit_ball_solutions:
            shot = shoot(RadialProblem(N=2, nl=gelfand_branch.nl, M=solution.M), tol=gelfand_branch.tol / 10)
            assert abs(shot.R - 1.0) <= 1e-6 + 1e-8

    def test_refined_grid_is_stable(self, gelfand_branch):
        refined = sweep(2, ExpCritical(gamma=1.0, q=0.0), np.linspace(0.1, 12.0, 120), tol=1e-9)
        assert len(refined.unit_ball_solutions) == 2
        top = max(s.M for s in refined.unit_ball_solutions)
        assert top == pytest.approx(max(s.M for s in gelfand_branch.unit_ball_solutions), abs=1e-4)
        assert refined.mass_budget == pytest.approx(gelfand_branch.mass_budget, rel=1e-8)


class TestSweep:
    def test_sublinear_growth_is_flagged(self):
        diagram = sweep(2, Affine(c0=1.0, c1=1.0), np.linspace(0.5, 3.0, 6), tol=1e-7)
        assert isinstance(diagram, BranchDiagram)
        assert any("not superlinear" in w for w in diagram.warnings)

    def test_parallel_matches_serial(self, gelfand):
        grid = np.linspace(0.5, 5.0, 6)
        serial = sweep(2, gelfand, grid, tol=1e-8, workers=1)
        parallel = sweep(2, gelfand, grid, tol=1e-8, workers=2)
        np.testing.assert_array_equal(serial.R_of_M, parallel.R_of_M)
        np.testing.assert_array_equal(serial.mass_of_M, parallel.mass_of_M)

    def test_rescaled_heights(self, gelfand):
        diagram = sweep(2, gelfand, [2.0, 4.0, 6.0], tol=1e-9, rescaled_from=4.0)
        assert list(diagram.rescaled) == [False, True, True]
        assert diagram.summary()["rescaled_points"] == 2
        expected = [8.0 * math.pi * (1.0 - math.exp(-M / 2.0)) for M in (2.0, 4.0, 6.0)]
        np.testing.assert_allclose(diagram.mass_of_M, expected, rtol=1e-6)

    @pytest.mark.parametrize("grid", [[1.0], [1.0, 0.5], [0.0, 1.0], [1.0, float("inf")]])
    def test_invalid_grid(self, gelfand, grid):
        with pytest.raises(ArgumentError):
            sweep(2, gelfand, grid)


class TestQuantization:
    def test_planar_exponential(self, gelfand):
        diagram = sweep(2, gelfand, [20.0, 25.0, 30.0], tol=1e-10)
        report = quantization_probe(diagram)
        assert report.method == "exponential-fit"
        assert report.theta_ref == pytest.approx(8.0 * math.pi)
        assert report.rel_gap < 1e-5
        assert report.decay_rate == pytest.approx(0.5, rel=1e-2)

    def test_three_dimensional_exponential(self, gelfand):
        diagram = sweep(3, gelfand, [18.0, 24.0, 30.0], tol=1e-10)
        report = quantization_probe(diagram)
        assert report.limit_mass_estimate == pytest.approx(81.0 * math.pi, rel=1e-2)
        assert not report.inconclusive

    def test_steeper_exponential(self):
        diagram = sweep(2, ExpCritical(gamma=2.0, q=0.0), [10.0, 12.5, 15.0], tol=1e-10)
        report = quantization_probe(diagram)
        assert report.theta_ref == pytest.approx(4.0 * math.pi, rel=1e-6)
        assert report.rel_gap <= 1e-2

    def test_subcritical_not_applicable(self):
        diagram = sweep(2, PowerLog(tau=0.0, p=3.0, alpha=0.0), [1.0, 2.0, 3.0], tol=1e-8)
        with pytest.raises(NotApplicableError):
            quantization_probe(diagram)


def exact_root_diagram(nl, R):
    n = len(R)
    return BranchDiagram(
        N=2,
        nl=nl,
        weight=ConstantWeight(),
        M_grid=np.arange(1.0, n + 1.0),
        R_of_M=np.array(R, dtype=float),
        mass_of_M=np.arange(1.0, n + 1.0),
        statuses=[ShotStatus.CROSSED_ZERO] * n,
        rescaled=np.zeros(n, dtype=bool),
        tol=1e-9,
    )


def no_shot(M):
    pytest.fail(f"Unexpected bisection shot at M={M}")


class TestRootRefinement:
    @pytest.mark.parametrize(
        "R,expected",
        [([1.5, 1.0, 0.5], 2.0), ([1.5, 1.0], 2.0), ([1.0, 1.5, 2.0], 1.0), ([0.5, 1.0, 1.0], 2.0)],
    )
    def test_grid_point_on_root_recorded_once(self, gelfand, R, expected):
        diagram = exact_root_diagram(gelfand, R)
        _refine_unit_ball(diagram, no_shot, BranchSettings())
        found = [s.M for s in diagram.unit_ball_solutions]
        assert expected in found
        assert len(found) == len(set(found))
        assert all(s.residual == 0.0 for s in diagram.unit_ball_solutions)

    def test_inconclusive_growth_gets_no_certificate(self, gelfand, monkeypatch):
        def inconclusive(nl, settings=None):
            raise InconclusiveClassificationError("trace matches no pattern")

        monkeypatch.setattr(sys.modules["src.branch.sweep"], "classify", inconclusive)
        diagram = sweep(2, gelfand, np.linspace(0.1, 12.0, 30), tol=1e-8)
        assert diagram.criticality is None
        assert diagram.bound_certificate is None
        assert diagram.summary()["bound_certificate"] is None
        assert any("No bound certificate" in w for w in diagram.warnings)
