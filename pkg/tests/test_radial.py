"""Tests for radial shooting against closed-form solutions."""

import math

import numpy as np
import pandas as pd
import pytest

from src.nonlinearity import Affine, ExpCritical
from src.radial import (
    ConstantWeight,
    RadialProblem,
    RampWeight,
    ShotStatus,
    TabulatedWeight,
    divergence_defect,
    flux_identity_holds,
    flux_residuals,
    origin_expansion,
    parse_weight,
    rescaled_shoot,
    shoot,
    sphere_area,
)
from src.utils.config import SolverSettings, get_config
from src.utils.errors import ArgumentError, ParameterDomainError


def gelfand_radius(M: float) -> float:
    """Zero of u = log(8 mu^2 / (1 + mu^2 r^2)^2) with 8 mu^2 = e^M."""
    mu = math.sqrt(math.exp(M) / 8.0)
    return math.sqrt(2.0 * math.sqrt(2.0) * mu - 1.0) / mu


def gelfand_mass(M: float) -> float:
    return 8.0 * math.pi * (1.0 - math.exp(-M / 2.0))


class TestOriginExpansion:
    def test_constant_forcing_is_exact(self):
        problem = RadialProblem(N=3, nl=Affine(c0=1.0, c1=0.0), M=2.0)
        eps = 1e-3
        u, q = origin_expansion(problem, eps)
        expected = 2.0 - (2.0 / 3.0) * math.sqrt(1.0 / 3.0) * eps**1.5
        assert u == pytest.approx(expected, rel=1e-15)
        assert q == pytest.approx(-(eps**3) / 3.0, rel=1e-14)

    def test_rescaled_expansion_starts_at_zero(self):
        problem = RadialProblem(N=2, nl=ExpCritical(gamma=1.0), M=10.0)
        v, q = origin_expansion(problem, 1e-4, rescaled=True)
        assert v == pytest.approx(-(1e-8) / 4.0, rel=1e-12)
        assert q == pytest.approx(-(1e-8) / 2.0, rel=1e-12)

    def test_radius_must_be_positive(self):
        problem = RadialProblem(N=2, nl=ExpCritical(gamma=1.0), M=1.0)
        with pytest.raises(ParameterDomainError):
            origin_expansion(problem, 0.0)


class TestConstantForcing:
    def test_two_dimensional_paraboloid(self):
        problem = RadialProblem(N=2, nl=Affine(c0=1.0, c1=0.0), M=1.0)
        shot = shoot(problem, tol=1e-10)
        assert shot.status == ShotStatus.CROSSED_ZERO
        assert shot.R == pytest.approx(2.0, rel=1e-8)
        assert shot.slope_at_R == pytest.approx(1.0, rel=1e-8)
        assert shot.mass == pytest.approx(4.0 * math.pi, rel=1e-8)

    def test_three_dimensional_profile(self):
        problem = RadialProblem(N=3, nl=Affine(c0=1.0, c1=0.0), M=1.0)
        shot = shoot(problem, tol=1e-10)
        R = (1.5 * math.sqrt(3.0)) ** (2.0 / 3.0)
        assert shot.R == pytest.approx(R, rel=1e-7)
        assert shot.mass == pytest.approx(4.0 * math.pi / 3.0 * R**3, rel=1e-7)

    def test_radius_cap(self):
        problem = RadialProblem(N=2, nl=Affine(c0=1.0, c1=0.0), M=1.0)
        shot = shoot(problem, r_cap=1.0, tol=1e-10)
        assert shot.status == ShotStatus.RADIUS_CAP_REACHED
        assert shot.R is None
        assert shot.radius_end == pytest.approx(1.0)
        assert shot.mass == pytest.approx(math.pi, rel=1e-8)

    @pytest.mark.parametrize("tol", [1e-6, 1e-8])
    def test_halving_tolerance_converges(self, tol):
        problem = RadialProblem(N=2, nl=Affine(c0=1.0, c1=0.0), M=1.0)
        coarse = shoot(problem, tol=tol).R
        fine = shoot(problem, tol=tol / 2).R
        assert abs(coarse - fine) <= 10 * tol
        assert fine == pytest.approx(2.0, abs=10 * tol)


class TestGelfandFamily:
    @pytest.mark.parametrize("mu", np.geomspace(0.5, 20.0, 10))
    def test_radius_and_mass(self, mu):
        M = math.log(8.0 * mu**2)
        shot = shoot(RadialProblem(N=2, nl=ExpCritical(gamma=1.0), M=M), tol=1e-9)
        assert shot.crossed
        assert shot.R == pytest.approx(gelfand_radius(M), rel=1e-5)
        assert shot.mass == pytest.approx(gelfand_mass(M), rel=1e-5)

    def test_flux_identity_on_every_step(self, gelfand):
        tol = 1e-8
        shot = shoot(RadialProblem(N=2, nl=gelfand, M=4.0), tol=tol)
        residuals = flux_residuals(shot)
        assert residuals.shape == shot.radius.shape
        assert residuals[0] == 0.0
        assert np.max(residuals) <= get_config().solver.flux_tolerance_factor * tol
        assert flux_identity_holds(shot)

    def test_flux_budget_comes_from_config(self, gelfand):
        shot = shoot(RadialProblem(N=2, nl=gelfand, M=4.0), tol=1e-8)
        assert not flux_identity_holds(shot, SolverSettings(flux_tolerance_factor=1e-12))

    @pytest.mark.parametrize("N,M", [(2, 1.0), (2, 6.0), (3, 2.0), (4, 3.0)])
    def test_divergence_identity(self, gelfand, N, M):
        shot = shoot(RadialProblem(N=N, nl=gelfand, M=M), tol=1e-9)
        assert shot.crossed
        assert divergence_defect(shot) <= 1e-4

    def test_divergence_needs_crossing(self, gelfand):
        shot = shoot(RadialProblem(N=2, nl=gelfand, M=4.0), r_cap=1e-3, tol=1e-8)
        with pytest.raises(ParameterDomainError):
            divergence_defect(shot)

    def test_huge_height_switches_to_rescaled(self, gelfand):
        shot = shoot(RadialProblem(N=2, nl=gelfand, M=700.0), tol=1e-9)
        assert shot.rescaled
        assert shot.crossed
        assert shot.mass == pytest.approx(8.0 * math.pi, rel=1e-6)
        assert shot.R == pytest.approx(math.sqrt(8.0) * math.exp(-175.0), rel=1e-5)
        assert shot.physical_radius()[-1] == pytest.approx(shot.R, rel=1e-12)
        assert shot.physical_u()[-1] == pytest.approx(0.0, abs=1e-6)
        assert shot.summary()["weight"] == "const:value=1.0"

    def test_rescaled_matches_physical(self, gelfand):
        problem = RadialProblem(N=2, nl=gelfand, M=5.0)
        physical = shoot(problem, tol=1e-10)
        rescaled = rescaled_shoot(problem, tol=1e-10)
        assert rescaled.rescaled and not physical.rescaled
        assert rescaled.mass == pytest.approx(physical.mass, rel=1e-7)
        assert rescaled.R == pytest.approx(physical.R, rel=1e-7)
        assert rescaled.slope_at_R == pytest.approx(physical.slope_at_R, rel=1e-6)

    def test_rescaled_flux_identity(self, gelfand):
        tol = 1e-8
        shot = rescaled_shoot(RadialProblem(N=3, nl=gelfand, M=12.0), tol=tol)
        assert flux_identity_holds(shot)


class TestValidation:
    def test_tolerance_range(self, gelfand):
        problem = RadialProblem(N=2, nl=gelfand, M=1.0)
        with pytest.raises(ParameterDomainError):
            shoot(problem, tol=1e-2)
        with pytest.raises(ParameterDomainError):
            shoot(problem, tol=1e-14)

    def test_dimension_and_height(self, gelfand):
        with pytest.raises(ParameterDomainError):
            RadialProblem(N=1, nl=gelfand, M=1.0)
        with pytest.raises(ParameterDomainError):
            RadialProblem(N=2, nl=gelfand, M=-1.0)

    def test_weight_must_stay_positive(self, gelfand):
        problem = RadialProblem(N=2, nl=gelfand, weight=RampWeight(a0=1.0, a1=-1.0), M=1.0)
        with pytest.raises(ParameterDomainError):
            shoot(problem, r_cap=50.0, tol=1e-8)


class TestWeights:
    def test_ramp_weight_flux_identity(self, gelfand):
        weight = RampWeight(a0=1.0, a1=0.5)
        shot = shoot(RadialProblem(N=2, nl=gelfand, weight=weight, M=2.0), r_cap=5.0, tol=1e-8)
        assert shot.crossed
        assert np.max(flux_residuals(shot)) <= 1e-6

    def test_parse_const_and_ramp(self):
        assert parse_weight("const:value=2")(3.0) == 2.0
        assert parse_weight("ramp:a0=1,a1=0.5")(2.0) == pytest.approx(2.0)

    def test_parse_table(self, tmp_path):
        path = tmp_path / "weight.csv"
        pd.DataFrame({"r": [0.0, 0.5, 1.0, 2.0], "a": [1.0, 1.2, 1.5, 2.0]}).to_csv(path, index=False)
        weight = parse_weight(f"table:{path}")
        assert isinstance(weight, TabulatedWeight)
        assert weight(0.5) == pytest.approx(1.2, rel=1e-12)
        weight.check_positive(2.0)
        with pytest.raises(ParameterDomainError):
            weight.check_positive(3.0)

    def test_unknown_weight(self):
        with pytest.raises(ArgumentError):
            parse_weight("gauss:s=1")

    def test_constant_weight_default(self):
        assert ConstantWeight().at_origin == 1.0

    def test_sphere_area(self):
        assert sphere_area(2) == pytest.approx(2.0 * math.pi)
        assert sphere_area(3) == pytest.approx(4.0 * math.pi)
