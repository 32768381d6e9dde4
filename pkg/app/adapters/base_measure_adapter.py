"""
Concrete base measures.

All of them are immutable pydantic models so they can be shared between
worker threads, compared for equality and round-tripped through JSON
(the ``kind`` field discriminates the union).
"""
import logging
from pathlib import Path
from typing import Annotated, Literal, Tuple, Union

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from app.errors import ParameterError
from app.interfaces.base_measure_interface import BaseMeasureInterface

logger = logging.getLogger(__name__)


def _as_output(values: NDArray) -> Union[float, NDArray]:
    return float(values) if np.ndim(values) == 0 else values


class UniformBase(BaseModel, BaseMeasureInterface):
    """gamma times the uniform distribution on [0, 1]; B0(x) = gamma * x."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["uniform"] = "uniform"
    gamma: float = Field(default=1.0, gt=0, allow_inf_nan=False, description="Total mass.")

    @property
    def mass(self) -> float:
        return self.gamma

    @property
    def is_continuous(self) -> bool:
        return True

    def cdf(self, x: ArrayLike) -> Union[float, NDArray]:
        return _as_output(self.gamma * np.clip(np.asarray(x, dtype=float), 0.0, 1.0))

    def quantile(self, u: ArrayLike) -> Union[float, NDArray]:
        return _as_output(np.clip(np.asarray(u, dtype=float), 0.0, 1.0))

    def support(self) -> Tuple[float, float]:
        return 0.0, 1.0


class PiecewiseLinearBase(BaseModel, BaseMeasureInterface):
    """
    Continuous measure whose CDF interpolates linearly between knots.

    ``levels`` is the normalised CDF at ``knots`` (0 at the first knot, 1 at
    the last); the measure is ``gamma`` times that shape.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["piecewise_linear"] = "piecewise_linear"
    knots: Tuple[float, ...]
    levels: Tuple[float, ...]
    gamma: float = Field(default=1.0, gt=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_shape(self):
        knots = np.asarray(self.knots, dtype=float)
        levels = np.asarray(self.levels, dtype=float)
        if knots.size < 2 or knots.size != levels.size:
            raise ValueError("need at least two knots and one level per knot")
        if not (np.all(np.isfinite(knots)) and np.all(np.diff(knots) > 0)):
            raise ValueError("knots must be finite and strictly increasing")
        if np.any(np.diff(levels) < 0) or levels[0] != 0.0 or levels[-1] != 1.0:
            raise ValueError("levels must be nondecreasing from 0 to 1")
        return self

    @classmethod
    def from_points(cls, knots: ArrayLike, cdf: ArrayLike, mass: float = 1.0) -> "PiecewiseLinearBase":
        """Normalise an unscaled nondecreasing CDF table into a base of total mass ``mass``."""
        values = np.asarray(cdf, dtype=float)
        if values.size < 2 or not values[-1] > values[0]:
            raise ParameterError("piecewise-linear CDF must increase somewhere")
        levels = (values - values[0]) / (values[-1] - values[0])
        levels[-1] = 1.0
        return cls(knots=tuple(np.asarray(knots, dtype=float).tolist()), levels=tuple(levels.tolist()), gamma=mass)

    @classmethod
    def from_csv(cls, path: Union[str, Path], mass: float = 1.0) -> "PiecewiseLinearBase":
        """Read a two-column ``x,cdf`` table."""
        frame = pd.read_csv(path)
        missing = {"x", "cdf"} - set(frame.columns)
        if missing:
            raise ParameterError(f"base CDF file {path} lacks column(s) {sorted(missing)}")
        frame = frame.sort_values("x", kind="stable")
        logger.debug(f"loaded {len(frame)} CDF knots from {path}")
        try:
            return cls.from_points(frame["x"].to_numpy(), frame["cdf"].to_numpy(), mass)
        except ValueError as e:
            raise ParameterError(f"invalid base CDF file {path}: {e}") from e

    @property
    def mass(self) -> float:
        return self.gamma

    @property
    def is_continuous(self) -> bool:
        return True

    def cdf(self, x: ArrayLike) -> Union[float, NDArray]:
        return _as_output(self.gamma * np.interp(np.asarray(x, dtype=float), self.knots, self.levels))

    def quantile(self, u: ArrayLike) -> Union[float, NDArray]:
        u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
        knots = np.asarray(self.knots)
        levels = np.asarray(self.levels)
        # first knot whose level reaches u; flat stretches resolve to their left end
        k = np.clip(np.searchsorted(levels, u, side="left"), 1, knots.size - 1)
        lo, hi = levels[k - 1], levels[k]
        frac = np.where(hi > lo, (u - lo) / np.where(hi > lo, hi - lo, 1.0), 0.0)
        return _as_output(knots[k - 1] + np.clip(frac, 0.0, 1.0) * (knots[k] - knots[k - 1]))

    def support(self) -> Tuple[float, float]:
        return self.knots[0], self.knots[-1]


class ScaledBase(BaseModel, BaseMeasureInterface):
    """``factor`` times a continuous measure."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["scaled"] = "scaled"
    inner: "ContinuousBase"
    factor: float = Field(..., gt=0, allow_inf_nan=False)

    @property
    def mass(self) -> float:
        return self.factor * self.inner.mass

    @property
    def is_continuous(self) -> bool:
        return True

    def cdf(self, x: ArrayLike) -> Union[float, NDArray]:
        return _as_output(self.factor * np.asarray(self.inner.cdf(x)))

    def quantile(self, u: ArrayLike) -> Union[float, NDArray]:
        return self.inner.quantile(u)

    def support(self) -> Tuple[float, float]:
        return self.inner.support()


class MixedBase(BaseModel, BaseMeasureInterface):
    """
    Posterior base after ``observations`` Bernoulli-process draws:
    (c * B0 + sum_w k_w delta_w) / (c + m).

    Masses are kept as the prior concentration and integer counts so that
    folding observations in one batch or several gives an equal object.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["mixed"] = "mixed"
    continuous: "ContinuousBase"
    concentration: float = Field(..., gt=0, allow_inf_nan=False, description="Prior concentration c.")
    observations: int = Field(..., ge=1, description="Number of draws m folded in.")
    atom_locations: Tuple[float, ...] = ()
    atom_counts: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_atoms(self):
        locs = np.asarray(self.atom_locations, dtype=float)
        counts = np.asarray(self.atom_counts, dtype=int)
        if locs.size != counts.size:
            raise ValueError("one count per atom location is required")
        if locs.size and not (np.all(np.isfinite(locs)) and np.all(np.diff(locs) > 0)):
            raise ValueError("atom locations must be finite, sorted and distinct")
        if np.any(counts < 1) or np.any(counts > self.observations):
            raise ValueError("atom counts must lie in [1, observations]")
        return self

    @property
    def denominator(self) -> float:
        return self.concentration + self.observations

    @property
    def weighted_mass(self) -> float:
        """(c + m) * mass = c * gamma + total count."""
        return self.concentration * self.continuous.mass + sum(self.atom_counts)

    @property
    def mass(self) -> float:
        return self.weighted_mass / self.denominator

    @property
    def is_continuous(self) -> bool:
        return False

    @property
    def atom_masses(self) -> Tuple[float, ...]:
        return tuple(k / self.denominator for k in self.atom_counts)

    def continuous_part(self) -> ScaledBase:
        return ScaledBase(inner=self.continuous, factor=self.concentration / self.denominator)

    def _weighted_cdf(self, x: NDArray) -> NDArray:
        counts = np.concatenate([[0], np.cumsum(self.atom_counts, dtype=float)])
        below = np.searchsorted(np.asarray(self.atom_locations, dtype=float), x, side="right")
        return self.concentration * np.asarray(self.continuous.cdf(x)) + counts[below]

    def cdf(self, x: ArrayLike) -> Union[float, NDArray]:
        return _as_output(self._weighted_cdf(np.asarray(x, dtype=float)) / self.denominator)

    def quantile(self, u: ArrayLike) -> Union[float, NDArray]:
        u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
        target = u * self.weighted_mass
        locs = np.asarray(self.atom_locations, dtype=float)
        counts = np.asarray(self.atom_counts, dtype=float)
        if locs.size == 0:
            return self.continuous.quantile(u * self.weighted_mass / (self.concentration * self.continuous.mass))

        right = self._weighted_cdf(locs)
        left = right - counts
        idx = np.searchsorted(right, target, side="left")
        on_atom = idx < locs.size
        on_atom &= left[np.minimum(idx, locs.size - 1)] < target
        # atoms strictly below the answer
        below = np.concatenate([[0.0], np.cumsum(counts)])[idx]
        cont_u = np.clip((target - below) / (self.concentration * self.continuous.mass), 0.0, 1.0)
        x = np.where(on_atom, locs[np.minimum(idx, locs.size - 1)], self.continuous.quantile(cont_u))
        return _as_output(x)

    def support(self) -> Tuple[float, float]:
        lo, hi = self.continuous.support()
        if self.atom_locations:
            lo, hi = min(lo, self.atom_locations[0]), max(hi, self.atom_locations[-1])
        return lo, hi


ContinuousBase = Annotated[
    Union[UniformBase, PiecewiseLinearBase, ScaledBase],
    Field(discriminator="kind"),
]
BaseMeasure = Annotated[
    Union[UniformBase, PiecewiseLinearBase, ScaledBase, MixedBase],
    Field(discriminator="kind"),
]

ScaledBase.model_rebuild()
MixedBase.model_rebuild()

base_measure_adapter = TypeAdapter(BaseMeasure)
