"""Tests for Liouville limit objects and blow-up rescaling."""

import math

import mpmath
import numpy as np
import pytest

from src.blowup import (
    LiouvilleProfile,
    auxiliary_integral,
    concentration_mass,
    dirac_flux,
    dirac_fundamental,
    liouville_eval,
    liouville_mass,
    profile_constant,
    profile_distance,
    rescale,
    slope_along_profile,
    subcritical_limit_check,
    theta_exact,
    theta_quadrature,
)
from src.nonlinearity import ExpCritical, PowerLog
from src.radial import RadialProblem, rescaled_shoot, shoot
from src.utils.errors import CoverageError, NotApplicableError, ParameterDomainError


class TestLiouvilleProfile:
    def test_planar_profile(self):
        lp = LiouvilleProfile(N=2, beta=1.0)
        assert lp.kappa == pytest.approx(1.0 / 8.0)
        value, slope = liouville_eval(lp, math.sqrt(8.0))
        assert value == pytest.approx(-2.0 * math.log(2.0), rel=1e-14)
        assert slope == pytest.approx(-math.sqrt(8.0) / 4.0, rel=1e-14)

    def test_origin(self):
        value, slope = liouville_eval(LiouvilleProfile(N=3, beta=2.0), 0.0)
        assert value == 0.0
        assert slope == 0.0

    def test_derivative_matches_finite_difference(self):
        lp = LiouvilleProfile(N=3, beta=0.7)
        r, h = np.array([0.3, 1.0, 4.0, 20.0]), 1e-6
        numeric = (lp.value(r + h) - lp.value(r - h)) / (2.0 * h)
        np.testing.assert_allclose(lp.derivative(r), numeric, rtol=1e-7)

    @pytest.mark.parametrize("N,beta", [(2, 1.0), (2, 2.0), (3, 1.0), (4, 0.5)])
    def test_flux_identity(self, N, beta):
        lp = LiouvilleProfile(N=N, beta=beta)
        for r in np.geomspace(1e-2, 1e2, 20):
            mass = liouville_mass(lp, r)
            assert abs(float(lp.flux(r)) - mass) <= 1e-8 * (1.0 + mass)

    @pytest.mark.parametrize("N", [2, 3, 5])
    def test_logarithmic_slope_at_infinity(self, N):
        lp = LiouvilleProfile(N=N, beta=1.5)
        r = 1e6
        local_slope = r * float(lp.derivative(r))
        assert local_slope == pytest.approx(-(N**2) / (1.5 * (N - 1)), rel=1e-4)

    def test_negative_radius(self):
        with pytest.raises(ParameterDomainError):
            liouville_eval(LiouvilleProfile(N=2, beta=1.0), -1.0)

    @pytest.mark.parametrize("N,beta", [(1, 1.0), (2, 0.0), (2, -1.0), (3, math.inf)])
    def test_invalid_parameters(self, N, beta):
        with pytest.raises(ParameterDomainError):
            LiouvilleProfile(N=N, beta=beta)


class TestTheta:
    @pytest.mark.parametrize(
        "N,beta,expected",
        [(2, 1.0, 8.0 * math.pi), (2, 2.0, 4.0 * math.pi), (3, 1.0, 81.0 * math.pi)],
    )
    def test_closed_form(self, N, beta, expected):
        assert theta_exact(N, beta) == pytest.approx(expected, rel=1e-14)

    def test_against_mpmath(self):
        N, beta = 4, 0.5
        with mpmath.workdps(30):
            omega = mpmath.pi ** (mpmath.mpf(N) / 2) / mpmath.gamma(mpmath.mpf(N) / 2 + 1)
            C = N * (mpmath.mpf(N) ** 2 / (N - 1)) ** (N - 1)
            reference = float(omega * C / mpmath.mpf(beta) ** (N - 1))
        assert theta_exact(N, beta) == pytest.approx(reference, rel=1e-13)

    def test_planar_quadrature(self):
        lp = LiouvilleProfile(N=2, beta=1.0)
        assert theta_quadrature(lp) == pytest.approx(8.0 * math.pi, rel=1e-8)

    @pytest.mark.parametrize("N", [2, 3, 4])
    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    def test_quadrature_matches_closed_form(self, N, beta):
        lp = LiouvilleProfile(N=N, beta=beta)
        assert theta_quadrature(lp) == pytest.approx(theta_exact(N, beta), rel=1e-6)

    def test_split_radius_is_irrelevant(self):
        lp = LiouvilleProfile(N=3, beta=1.0)
        assert theta_quadrature(lp, r_split=0.5) == pytest.approx(theta_quadrature(lp, r_split=50.0), rel=1e-8)

    @pytest.mark.parametrize("beta", [0.5, 2.0, 3.0])
    def test_auxiliary_integral_is_beta_free(self, beta):
        lp = LiouvilleProfile(N=3, beta=beta)
        assert auxiliary_integral(lp) == pytest.approx(lp.omega_N * profile_constant(3), rel=1e-6)


class TestDiracFundamental:
    def test_boundary_and_unit_level(self):
        assert dirac_fundamental(2, 2.0 * math.pi, 1.0, 1.0) == 0.0
        assert dirac_fundamental(2, 2.0 * math.pi, 1.0, math.exp(-1.0)) == pytest.approx(1.0)

    def test_singular_at_origin(self):
        assert dirac_fundamental(3, 1.0, 2.0, 0.0) == math.inf

    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_flux_is_point_mass(self, N):
        s = np.geomspace(1e-4, 1.0, 7)
        np.testing.assert_allclose(dirac_flux(N, 3.5, s), 3.5, rtol=1e-12)

    def test_domain(self):
        with pytest.raises(ParameterDomainError):
            dirac_fundamental(2, 1.0, 1.0, 2.0)
        with pytest.raises(ParameterDomainError):
            dirac_fundamental(2, -1.0, 1.0, 0.5)


class TestRescaling:
    @pytest.mark.parametrize("M", [5.0, 15.0, 30.0])
    def test_exponential_matches_liouville(self, gelfand, M):
        tol = 1e-9
        shot = rescaled_shoot(RadialProblem(N=2, nl=gelfand, M=M), tol=tol)
        gap_v, gap_vprime = profile_distance(rescale(shot), LiouvilleProfile(N=2, beta=1.0), 10.0)
        assert gap_v <= 10.0 * tol
        assert gap_vprime <= 1e-6

    def test_physical_shot_rescales(self, gelfand):
        shot = shoot(RadialProblem(N=2, nl=gelfand, M=8.0), tol=1e-10)
        rp = rescale(shot)
        assert rp.rho[0] == 0.0 and rp.v[0] == 0.0
        assert np.all(rp.v <= 0.0)
        gap_v, _ = profile_distance(rp, LiouvilleProfile(N=2, beta=1.0), 10.0)
        assert gap_v <= 1e-6

    def test_small_height_window_is_clamped(self, gelfand):
        shot = rescaled_shoot(RadialProblem(N=2, nl=gelfand, M=5.0), tol=1e-9)
        rp = rescale(shot)
        assert rp.rho_end < 10.0
        assert rp.window(10.0) == rp.rho_end

    def test_uncovered_window(self, gelfand):
        shot = rescaled_shoot(RadialProblem(N=2, nl=gelfand, M=30.0), r_cap=3.0, tol=1e-9)
        with pytest.raises(CoverageError):
            profile_distance(rescale(shot), LiouvilleProfile(N=2, beta=1.0), 10.0)

    def test_critical_correction_decays(self):
        nl = ExpCritical(gamma=1.0, q=1.0)
        lp = LiouvilleProfile(N=2, beta=1.0)
        gaps = []
        for M in (10.0, 20.0, 30.0):
            shot = rescaled_shoot(RadialProblem(N=2, nl=nl, M=M), tol=1e-9)
            gaps.append(profile_distance(rescale(shot), lp, 5.0)[0])
        assert gaps[0] > gaps[1] > gaps[2]

    def test_subcritical_limit(self):
        nl = PowerLog(tau=0.0, p=3.0, alpha=0.0)
        gaps = []
        for M in (50.0, 200.0, 800.0):
            shot = rescaled_shoot(RadialProblem(N=2, nl=nl, M=M), tol=1e-9)
            gaps.append(subcritical_limit_check(rescale(shot), 2, 2.0))
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-2

    def test_subcritical_limit_needs_subcritical_growth(self, gelfand):
        shot = rescaled_shoot(RadialProblem(N=2, nl=gelfand, M=10.0), tol=1e-8)
        with pytest.raises(NotApplicableError):
            subcritical_limit_check(rescale(shot), 2, 2.0)

    def test_concentration_mass(self, gelfand):
        shot = rescaled_shoot(RadialProblem(N=2, nl=gelfand, M=30.0), tol=1e-10)
        rp = rescale(shot)
        lp = LiouvilleProfile(N=2, beta=1.0)
        assert concentration_mass(rp, 3.0) == pytest.approx(liouville_mass(lp, 3.0), rel=1e-6)
        assert concentration_mass(rp, 2.0 * rp.rho_end) == shot.mass
        assert concentration_mass(rp, 0.0) == 0.0

    def test_slope_trace_for_exponential(self, gelfand):
        shot = rescaled_shoot(RadialProblem(N=2, nl=gelfand, M=20.0), tol=1e-9)
        rp = rescale(shot)
        _, slope = slope_along_profile(rp)
        v = rp.v[rp.v < 0]
        assert slope.shape == v.shape
        np.testing.assert_allclose(slope[v < -0.1], 1.0, rtol=1e-9)
