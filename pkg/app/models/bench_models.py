from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.adapters.base_measure_adapter import BaseMeasure, UniformBase
from app.models.measure_models import BetaProcessParams
from app.models.sampler_models import Algorithm, SamplerSpec
from app.settings import DEFAULT_CONCENTRATION, DEFAULT_GRID, DEFAULT_PATHS, COMPARISON_ORDER, COMPARISON_SETTINGS


def comparison_specs() -> Tuple[SamplerSpec, ...]:
    """The five comparison settings, in table order."""
    return tuple(SamplerSpec(algorithm=Algorithm(name), **COMPARISON_SETTINGS[name]) for name in COMPARISON_ORDER)


class BenchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    c: float = Field(default=DEFAULT_CONCENTRATION, gt=0, allow_inf_nan=False)
    base: BaseMeasure = Field(default_factory=UniformBase)
    grid: Tuple[float, ...] = DEFAULT_GRID
    paths: int = Field(default=DEFAULT_PATHS, ge=1, description="Sample paths M per algorithm.")
    master_seed: int = Field(default=20140101, ge=0, lt=2 ** 64)
    samplers: Tuple[SamplerSpec, ...] = Field(default_factory=comparison_specs)
    workers: int = Field(default=1, ge=1)

    @field_validator("grid")
    @classmethod
    def _increasing(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        grid = np.asarray(value, dtype=float)
        if grid.size == 0:
            raise ValueError("grid must not be empty")
        if not (np.all(np.isfinite(grid)) and np.all(np.diff(grid) > 0)):
            raise ValueError("grid must be finite and strictly increasing")
        return value

    @model_validator(mode="after")
    def _grid_in_support(self):
        lo, hi = self.base.support()
        if self.grid[0] < lo or self.grid[-1] > hi:
            raise ValueError(f"grid [{self.grid[0]}, {self.grid[-1]}] leaves the base support [{lo}, {hi}]")
        if not self.samplers:
            raise ValueError("at least one sampler spec is required")
        return self

    @property
    def params(self) -> BetaProcessParams:
        return BetaProcessParams(c=self.c, base=self.base)


class GridMoments(BaseModel):
    """Per-grid-point mean and standard deviation of B(x) over the sample paths."""
    model_config = ConfigDict(frozen=True)

    grid: Tuple[float, ...]
    mean: Tuple[float, ...]
    sd: Tuple[float, ...]
    paths: int = Field(..., ge=1)
    sd_defined: bool = Field(default=True, description="False when one path leaves the sd undefined (reported as 0).")

    @model_validator(mode="after")
    def _aligned(self):
        if not (len(self.grid) == len(self.mean) == len(self.sd)):
            raise ValueError("grid, mean and sd must have equal length")
        return self


class BenchRow(BaseModel):
    algorithm: str
    params: str
    max_mean_error: Optional[float] = Field(default=None, ge=0)
    max_sd_error: Optional[float] = Field(default=None, ge=0)
    wall_time_s: float = Field(default=0.0, ge=0)
    error: Optional[str] = Field(default=None, description="Failure message when the algorithm did not complete.")

    @property
    def ok(self) -> bool:
        return self.error is None


class BenchReport(BaseModel):
    c: float
    mass: float
    grid: Tuple[float, ...]
    paths: int
    master_seed: int
    rows: List[BenchRow] = Field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return all(row.ok for row in self.rows)
