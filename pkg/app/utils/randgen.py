"""
Seedable random streams and the elementary laws the constructions draw from.

Streams are numpy ``Philox`` generators (counter-based) keyed by a
``SeedSequence``; substream ``(salt, index)`` is reproducible on its own, so
replication r of an experiment can be regenerated without replaying 0..r-1.
"""
import logging
from typing import Annotated, Literal, Optional, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator

from app.errors import DomainError

logger = logging.getLogger(__name__)

_SEED_LIMIT = 2 ** 64


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _SEED_LIMIT:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return seed


class RandomStream:
    """
    Single-owner random stream.

    Do not share one instance between threads; derive one substream per
    worker instead.
    """

    def __init__(self, seed: int, key: Tuple[int, ...] = ()):
        self.seed = _check_seed(seed)
        self.key = tuple(int(k) for k in key)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, key={self.key})"

    # --- elementary draws ------------------------------------------------

    def uniform(self, size: Optional[int] = None) -> Union[float, NDArray]:
        return self.generator.random(size)

    def exponential(self, size: Optional[int] = None) -> Union[float, NDArray]:
        return self.generator.standard_exponential(size)

    def poisson(self, lam: Union[float, NDArray], size: Optional[int] = None) -> Union[int, NDArray]:
        return self.generator.poisson(lam, size)

    def log_gamma(self, shape: float, size: Optional[int] = None) -> Union[float, NDArray]:
        """
        Log of a Gamma(shape, 1) draw.

        Shapes below one are boosted: G_a = G_{a+1} * U^(1/a), carried in log
        space so draws far below the smallest double stay exact.
        """
        if shape >= 1.0:
            return np.log(self.generator.standard_gamma(shape, size))
        boosted = np.log(self.generator.standard_gamma(shape + 1.0, size))
        # 1 - U avoids log(0)
        return boosted + np.log1p(-self.generator.random(size)) / shape

    def gamma(self, shape: float, rate: float = 1.0, size: Optional[int] = None) -> Union[float, NDArray]:
        return np.exp(self.log_gamma(shape, size)) / rate

    def log_beta(self, a: float, b: float, size: Optional[int] = None) -> Tuple[NDArray, NDArray]:
        """(ln X, ln(1 - X)) for X ~ Beta(a, b), built from two log-gammas."""
        log_ga = self.log_gamma(a, size)
        log_gb = self.log_gamma(b, size)
        log_total = np.logaddexp(log_ga, log_gb)
        return log_ga - log_total, log_gb - log_total

    def beta(self, a: float, b: float, size: Optional[int] = None) -> Union[float, NDArray]:
        log_x, _ = self.log_beta(a, b, size)
        return np.exp(log_x)


def make_stream(seed: int) -> RandomStream:
    return RandomStream(seed)


def derive_substream(seed: int, index: int, salt: int = 0) -> RandomStream:
    """Stream number ``index`` under ``seed``; ``salt`` separates unrelated families of substreams."""
    if index < 0 or salt < 0:
        raise DomainError(f"substream index and salt must be nonnegative, got index={index!r}, salt={salt!r}")
    return RandomStream(seed, key=(salt, index))


# --- Distribution specs ------------------------------------------------------

class UniformDist(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["uniform"] = "uniform"


class ExponentialDist(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["exponential"] = "exponential"


class GammaDist(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["gamma"] = "gamma"
    shape: float = Field(..., gt=0, allow_inf_nan=False)
    rate: float = Field(default=1.0, gt=0, allow_inf_nan=False)


class PoissonDist(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["poisson"] = "poisson"
    mean: float = Field(..., ge=0, allow_inf_nan=False)


class BetaDist(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["beta"] = "beta"
    a: float = Field(..., gt=0, allow_inf_nan=False)
    b: float = Field(..., gt=0, allow_inf_nan=False)


DistSpec = Annotated[
    Union[UniformDist, ExponentialDist, GammaDist, PoissonDist, BetaDist],
    Field(discriminator="kind"),
]
dist_spec_adapter = TypeAdapter(DistSpec)


def parse_dist(data: dict) -> DistSpec:
    """Build a distribution spec from a mapping such as {"kind": "gamma", "shape": 0.5}."""
    try:
        return dist_spec_adapter.validate_python(data)
    except ValidationError as e:
        raise DomainError(f"invalid distribution parameters {data!r}: {e.errors()[0]['msg']}") from e


def sample_dist(stream: RandomStream, spec: DistSpec, size: Optional[int] = None) -> Union[float, int, NDArray]:
    """Draw from the law named by ``spec`` (Poisson draws are exact for every mean)."""
    if isinstance(spec, UniformDist):
        return stream.uniform(size)
    if isinstance(spec, ExponentialDist):
        return stream.exponential(size)
    if isinstance(spec, GammaDist):
        return stream.gamma(spec.shape, spec.rate, size)
    if isinstance(spec, PoissonDist):
        return stream.poisson(spec.mean, size)
    if isinstance(spec, BetaDist):
        return stream.beta(spec.a, spec.b, size)
    raise DomainError(f"unknown distribution spec: {spec!r}")


# --- Arrival times -------------------------------------------------------------

class ArrivalTimes(BaseModel):
    """Arrival times Gamma_1 < ... < Gamma_k of a unit-rate Poisson process."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    gammas: np.ndarray = Field(..., description="Strictly increasing positive arrival times.")

    @field_validator("gammas", mode="before")
    @classmethod
    def _increasing(cls, value):
        gammas = np.array(value, dtype=float).reshape(-1)
        if gammas.size == 0:
            raise ValueError("at least one arrival time is required")
        if not (np.all(np.isfinite(gammas)) and gammas[0] > 0 and np.all(np.diff(gammas) > 0)):
            raise ValueError("arrival times must be positive and strictly increasing")
        gammas.setflags(write=False)
        return gammas

    def __len__(self) -> int:
        return int(self.gammas.size)

    def tail_masses(self) -> NDArray:
        """Gamma_k - Gamma_i for each i, summed from the increments so no precision is lost near Gamma_k."""
        increments = np.diff(self.gammas)
        return np.concatenate([np.cumsum(increments[::-1])[::-1], [0.0]])


def arrival_times(stream: RandomStream, count: int) -> ArrivalTimes:
    if count < 1:
        raise DomainError(f"arrival_times needs count >= 1, got {count!r}")
    return ArrivalTimes(gammas=np.cumsum(stream.exponential(count)))
