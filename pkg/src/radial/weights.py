"""Radial weights a(r) multiplying the nonlinearity."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError, model_validator
from scipy.interpolate import CubicSpline

from ..utils.errors import ArgumentError, ParameterDomainError

ArrayLike = Union[float, np.ndarray]


class RadialWeight(BaseModel, ABC):
    """Positive radial weight a: [0, r_cap] -> (0, inf)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    def __init__(self, **data: Any):
        try:
            super().__init__(**data)
        except ValidationError as e:
            raise ParameterDomainError(f"Invalid weight {self.__class__.__name__}: {e}") from e

    @abstractmethod
    def __call__(self, r: ArrayLike) -> ArrayLike:
        """Weight value at radius r."""

    @property
    def at_origin(self) -> float:
        return float(self(0.0))

    def check_positive(self, r_cap: float, samples: int = 257) -> None:
        """Raise ParameterDomainError unless a > 0 on [0, r_cap]."""
        values = np.asarray(self(np.linspace(0.0, r_cap, samples)), dtype=float)
        if not np.all(values > 0):
            raise ParameterDomainError(f"Weight must be positive on [0, {r_cap}]")

    def describe(self) -> str:
        return self.__class__.__name__


class ConstantWeight(RadialWeight):
    value: float = Field(1.0, gt=0)

    def __call__(self, r: ArrayLike) -> ArrayLike:
        if np.ndim(r) == 0:
            return self.value
        return np.full(np.shape(r), self.value)

    def describe(self) -> str:
        return f"const:value={self.value!r}"


class RampWeight(RadialWeight):
    """a(r) = a0 + a1 r."""

    a0: float = Field(gt=0)
    a1: float = 0.0

    def __call__(self, r: ArrayLike) -> ArrayLike:
        return self.a0 + self.a1 * np.asarray(r, dtype=float)[()]

    def describe(self) -> str:
        return f"ramp:a0={self.a0!r},a1={self.a1!r}"


class TabulatedWeight(RadialWeight):
    """Cubic-spline interpolation of tabulated (radius, value) pairs starting at r = 0."""

    radii: Tuple[float, ...]
    values: Tuple[float, ...]

    _spline: CubicSpline = PrivateAttr()

    @model_validator(mode="after")
    def _check_table(self) -> "TabulatedWeight":
        if len(self.radii) != len(self.values) or len(self.radii) < 2:
            raise ValueError("radii and values need equal length >= 2")
        if self.radii[0] != 0 or any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must start at 0 and increase strictly")
        if min(self.values) <= 0:
            raise ValueError("tabulated values must be positive")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._spline = CubicSpline(np.asarray(self.radii), np.asarray(self.values))

    def __call__(self, r: ArrayLike) -> ArrayLike:
        out = self._spline(np.asarray(r, dtype=float))
        return out[()] if np.ndim(out) == 0 else out

    def check_positive(self, r_cap: float, samples: int = 257) -> None:
        if r_cap > self.radii[-1]:
            raise ParameterDomainError(
                f"Tabulated weight covers [0, {self.radii[-1]}], shot needs [0, {r_cap}]"
            )
        super().check_positive(r_cap, samples)

    def describe(self) -> str:
        return f"table:{len(self.radii)} nodes on [0, {self.radii[-1]!r}]"


def parse_weight(spec: str) -> RadialWeight:
    """Parse ``const:value=1``, ``ramp:a0=1,a1=0.5`` or ``table:weights.csv``."""
    tag, _, body = spec.strip().partition(":")
    tag = tag.lower()
    try:
        if tag == "const":
            params = dict(item.split("=") for item in body.split(",")) if body else {}
            return ConstantWeight(**{k: float(v) for k, v in params.items()})
        if tag == "ramp":
            params = dict(item.split("=") for item in body.split(","))
            return RampWeight(**{k: float(v) for k, v in params.items()})
        if tag == "table":
            return load_weight_table(body)
    except ValueError as e:
        if isinstance(e, (ParameterDomainError, ArgumentError)):
            raise
        raise ArgumentError(f"Malformed weight spec '{spec}'") from e
    raise ArgumentError(f"Unknown weight '{tag}' (known: const, ramp, table)")


def load_weight_table(path: Union[str, Path]) -> TabulatedWeight:
    """Read a tabulated weight from a CSV file with columns r, a."""
    path = Path(path)
    if not path.exists():
        raise ArgumentError(f"Weight table not found: {path}")
    table = pd.read_csv(path)
    missing = {"r", "a"} - set(table.columns)
    if missing:
        raise ArgumentError(f"Weight table {path} lacks columns {sorted(missing)}")
    return TabulatedWeight(
        radii=tuple(table["r"].astype(float)),
        values=tuple(table["a"].astype(float)),
    )
