from enum import Enum
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Algorithm(str, Enum):
    PC = "pc"
    AS = "as"
    FK = "fk"
    STICK = "stick"
    PREP5 = "prep5"
    PREP6 = "prep6"
    DLS = "dls"
    LEE_KIM = "leekim"
    LEE = "lee"


# parameters each construction cannot run without
_REQUIRED = {
    Algorithm.PC: ("n",),
    Algorithm.AS: ("n",),
    Algorithm.FK: ("jumps",),
    Algorithm.STICK: (),
    Algorithm.PREP5: (),
    Algorithm.PREP6: (),
    Algorithm.DLS: ("n",),
    Algorithm.LEE_KIM: ("epsilon",),
    Algorithm.LEE: ("n", "epsilon"),
}

# every parameter a construction reads
ALGORITHM_PARAMETERS = {
    Algorithm.PC: ("n",),
    Algorithm.AS: ("n",),
    Algorithm.FK: ("jumps",),
    Algorithm.STICK: ("rounds",),
    Algorithm.PREP5: ("rounds",),
    Algorithm.PREP6: ("rounds",),
    Algorithm.DLS: ("n", "partition", "partitions"),
    Algorithm.LEE_KIM: ("epsilon",),
    Algorithm.LEE: ("n", "epsilon"),
}


class SamplerSpec(BaseModel):
    """
    Which construction to run and with what truncation.

    ``rounds`` may be left unset for the stick-breaking families; the
    sampler then picks the round count that leaves at most 1e-6 expected
    residual mass. A DLS partition is given either explicitly or as a
    number of equal-mass cells.
    """
    model_config = ConfigDict(frozen=True, use_enum_values=False)

    algorithm: Algorithm
    n: Optional[int] = Field(default=None, ge=1, description="Atom count (PC, AS, Lee) or DLS terms per cell.")
    rounds: Optional[int] = Field(default=None, ge=1, description="Stick-breaking rounds R.")
    jumps: Optional[int] = Field(default=None, ge=1, description="Ferguson-Klass jump count N.")
    epsilon: Optional[float] = Field(default=None, gt=0, lt=1, allow_inf_nan=False)
    partition: Optional[Tuple[float, ...]] = Field(default=None, description="DLS cut points w0 < ... < wm.")
    partitions: Optional[int] = Field(default=None, ge=1, description="DLS cell count m for an equal-mass partition.")

    @field_validator("partition")
    @classmethod
    def _increasing(cls, value: Optional[Tuple[float, ...]]) -> Optional[Tuple[float, ...]]:
        if value is None:
            return value
        points = np.asarray(value, dtype=float)
        if points.size < 2:
            raise ValueError("a partition needs at least two cut points")
        if not (np.all(np.isfinite(points)) and np.all(np.diff(points) > 0)):
            raise ValueError("partition cut points must be finite and strictly increasing")
        return value

    @model_validator(mode="after")
    def _required_parameters(self):
        missing = [name for name in _REQUIRED[self.algorithm] if getattr(self, name) is None]
        if self.algorithm is Algorithm.DLS and self.partition is None and self.partitions is None:
            missing.append("partition or partitions")
        if missing:
            raise ValueError(f"algorithm {self.algorithm.value!r} needs {', '.join(missing)}")
        return self

    @property
    def variant(self) -> Optional[Literal["eq5", "eq6"]]:
        """Which Poisson-process form the POISSON_REP constructions use."""
        return {Algorithm.PREP5: "eq5", Algorithm.PREP6: "eq6"}.get(self.algorithm)

    @property
    def cell_count(self) -> Optional[int]:
        if self.partition is not None:
            return len(self.partition) - 1
        return self.partitions

    def describe(self) -> str:
        """Parameter column text, e.g. ``m=200, n=200`` or ``eps=0.01``."""
        parts = []
        if self.algorithm is Algorithm.DLS:
            parts.append(f"m={self.cell_count}")
        if self.n is not None:
            parts.append(f"n={self.n}")
        if self.rounds is not None:
            parts.append(f"R={self.rounds}")
        if self.jumps is not None:
            parts.append(f"N={self.jumps}")
        if self.epsilon is not None:
            parts.append(f"eps={self.epsilon:g}")
        return ", ".join(parts) if parts else "default"
