"""Registered nonlinearity families.

PowerLog and ExpCritical are the subcritical and critical model growths;
PureExpPower e^{t^alpha} with alpha > 1 has no finite asymptotic slope and drives
the counterexample; Scaled multiplies any family by a constant; Affine
gives constant and linear forcing with closed-form solutions.
"""

from typing import Optional
import math

import numpy as np
from pydantic import Field, model_validator

from .base import ArrayLike, Nonlinearity


class PowerLog(Nonlinearity):
    """f(t) = log^tau(1+t) * t^p * e^{t^alpha}; alpha = 0 drops the exponential factor."""

    family = "powerlog"

    tau: float = Field(ge=0)
    p: float = Field(ge=1)
    alpha: float = Field(ge=0, lt=1)

    def log_f(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.p * np.log(t)
            if self.tau > 0:
                out = out + self.tau * np.log(np.log1p(t))
            if self.alpha > 0:
                out = out + t ** self.alpha
        return out[()] if out.ndim == 0 else out

    def dlog_f(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.p / t
            if self.tau > 0:
                out = out + self.tau / ((1.0 + t) * np.log1p(t))
            if self.alpha > 0:
                out = out + self.alpha * t ** (self.alpha - 1.0)
        return out[()] if out.ndim == 0 else out

    @property
    def exact_beta(self) -> Optional[float]:
        return 0.0

    def superlinearity_exponent_for(self, N: int) -> Optional[float]:
        if self.alpha > 0:
            return 1.0
        d = self.p - (N - 1)
        return d if d > 0 else None

    def _fprime_where_vanishing(self, t: float) -> float:
        # f ~ t^{p+tau} near 0
        return 1.0 if (self.tau == 0 and self.p == 1) else 0.0


class ExpCritical(Nonlinearity):
    """f(t) = e^{gamma t} / (1+t)^q, asymptotic slope gamma."""

    family = "expcrit"

    gamma: float = Field(gt=0)
    q: float = 0.0

    def log_f(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        out = self.gamma * t - self.q * np.log1p(t)
        return out[()] if out.ndim == 0 else out

    def dlog_f(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        out = self.gamma - self.q / (1.0 + t)
        return out[()] if out.ndim == 0 else out

    @property
    def exact_beta(self) -> Optional[float]:
        return self.gamma

    @property
    def monotone_from(self) -> float:
        return max(0.0, self.q / self.gamma - 1.0)


class PureExpPower(Nonlinearity):
    """f(t) = e^{t^alpha}; f'/f diverges for alpha > 1."""

    family = "exppow"

    alpha: float = Field(gt=0)

    def log_f(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        out = t ** self.alpha
        return out[()] if out.ndim == 0 else out

    def dlog_f(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            out = self.alpha * t ** (self.alpha - 1.0)
        return out[()] if out.ndim == 0 else out

    def _slope_at_zero(self) -> float:
        if self.alpha < 1:
            return math.inf
        return 1.0 if self.alpha == 1 else 0.0

    @property
    def exact_beta(self) -> Optional[float]:
        if self.alpha > 1:
            return math.inf
        return 1.0 if self.alpha == 1 else 0.0


class Scaled(Nonlinearity):
    """f(t) = c * inner(t); same asymptotic slope as the inner family."""

    family = "scaled"

    c: float = Field(gt=0)
    inner: Nonlinearity

    def log_f(self, t: ArrayLike) -> ArrayLike:
        return math.log(self.c) + self.inner.log_f(t)

    def dlog_f(self, t: ArrayLike) -> ArrayLike:
        return self.inner.dlog_f(t)

    def _slope_at_zero(self) -> float:
        return self.inner._slope_at_zero()

    def _fprime_where_vanishing(self, t: float) -> float:
        return self.c * self.inner._fprime_where_vanishing(t)

    @property
    def exact_beta(self) -> Optional[float]:
        return self.inner.exact_beta

    @property
    def monotone_from(self) -> float:
        return self.inner.monotone_from

    def superlinearity_exponent_for(self, N: int) -> Optional[float]:
        return self.inner.superlinearity_exponent_for(N)


class Affine(Nonlinearity):
    """f(t) = c0 + c1 t; constant forcing when c1 = 0. Not superlinear."""

    family = "affine"

    c0: float = Field(ge=0)
    c1: float = Field(ge=0)

    @model_validator(mode="after")
    def _not_identically_zero(self) -> "Affine":
        if self.c0 + self.c1 <= 0:
            raise ValueError("c0 + c1 must be positive")
        return self

    def log_f(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            out = np.log(self.c0 + self.c1 * t)
        return out[()] if out.ndim == 0 else out

    def dlog_f(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.c1 / (self.c0 + self.c1 * t)
        return out[()] if out.ndim == 0 else out

    def _fprime_where_vanishing(self, t: float) -> float:
        return self.c1

    @property
    def exact_beta(self) -> Optional[float]:
        return 0.0

    def superlinearity_exponent_for(self, N: int) -> Optional[float]:
        return None


REGISTRY = {cls.family: cls for cls in (PowerLog, ExpCritical, PureExpPower, Scaled, Affine)}
