from typing import Iterator, List, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.adapters.base_measure_adapter import BaseMeasure


class AtomicMeasure(BaseModel):
    """
    A sampled path: atoms (location, weight) with weights carried as logs.

    The smallest weights of several constructions are far below the
    smallest double, so ``log_weights`` is the exact record and ``weights``
    is derived from it.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    locations: np.ndarray
    log_weights: np.ndarray
    dropped_atoms: int = Field(default=0, ge=0, description="Zero-weight atoms removed by the sampler.")

    @field_validator("locations", "log_weights", mode="before")
    @classmethod
    def _as_vector(cls, value):
        array = np.array(value, dtype=float).reshape(-1)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check_atoms(self):
        if self.locations.size != self.log_weights.size:
            raise ValueError("one weight per location is required")
        if not np.all(np.isfinite(self.locations)):
            raise ValueError("atom locations must be finite")
        if np.any(np.isnan(self.log_weights)) or np.any(self.log_weights == np.inf):
            raise ValueError("atom weights must be finite and nonnegative")
        return self

    @classmethod
    def from_weights(cls, locations: ArrayLike, weights: ArrayLike, dropped_atoms: int = 0) -> "AtomicMeasure":
        weights = np.asarray(weights, dtype=float)
        if np.any(weights < 0):
            raise ValueError("atom weights must be nonnegative")
        with np.errstate(divide="ignore"):
            return cls(locations=locations, log_weights=np.log(weights), dropped_atoms=dropped_atoms)

    @classmethod
    def empty(cls, dropped_atoms: int = 0) -> "AtomicMeasure":
        return cls(locations=[], log_weights=[], dropped_atoms=dropped_atoms)

    @property
    def weights(self) -> NDArray:
        return np.exp(self.log_weights)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def atoms(self) -> List[Tuple[float, float]]:
        return list(zip(self.locations.tolist(), self.weights.tolist()))

    def __len__(self) -> int:
        return int(self.locations.size)

    def __iter__(self) -> Iterator[Tuple[float, float]]:
        return iter(self.atoms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return (
            self.dropped_atoms == other.dropped_atoms
            and np.array_equal(self.locations, other.locations)
            and np.array_equal(self.log_weights, other.log_weights)
        )

    __hash__ = None


class BernoulliDraw(BaseModel):
    """Locations whose coin flip succeeded; a finite set of unit-weight atoms."""
    model_config = ConfigDict(frozen=True)

    locations: Tuple[float, ...] = ()

    @field_validator("locations")
    @classmethod
    def _finite(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        if not all(np.isfinite(value)):
            raise ValueError("draw locations must be finite")
        if len(set(value)) != len(value):
            raise ValueError("draw locations must be distinct")
        return value

    def __len__(self) -> int:
        return len(self.locations)


class BetaProcessParams(BaseModel):
    """BP(c, B0): concentration and base measure."""
    model_config = ConfigDict(frozen=True)

    c: float = Field(..., gt=0, allow_inf_nan=False, description="Concentration parameter.")
    base: BaseMeasure

    @property
    def mass(self) -> float:
        return self.base.mass
