import logging
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.errors import NumericError, ParameterError
from app.interfaces.base_measure_interface import BaseMeasureInterface
from app.models.measure_models import AtomicMeasure, BetaProcessParams
from app.utils.randgen import RandomStream
from app.utils.special_fn import LevyTailSpec

logger = logging.getLogger(__name__)


def tail_spec(params: BetaProcessParams) -> LevyTailSpec:
    return LevyTailSpec(c=params.c, gamma=params.mass)


def require_continuous(params: BetaProcessParams, construction: str) -> None:
    if not params.base.is_continuous:
        raise ParameterError(f"{construction} needs a continuous base measure; got kind {params.base.kind!r}")


def draw_locations(base: BaseMeasureInterface, stream: RandomStream, size: int) -> NDArray:
    """i.i.d. locations from base / mass by inversion."""
    if size == 0:
        return np.empty(0)
    return np.asarray(base.quantile(stream.uniform(size)), dtype=float)


def unit_weight_path(
    locations: ArrayLike,
    log_weights: ArrayLike,
    construction: str,
    dropped_atoms: int = 0,
) -> AtomicMeasure:
    """Path whose weights must all lie in (0, 1]."""
    log_weights = np.asarray(log_weights, dtype=float)
    bad = ~np.isfinite(log_weights) | (log_weights > 0)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise NumericError(f"{construction} produced weight exp({log_weights[i]!r}) outside (0, 1]")
    return AtomicMeasure(locations=locations, log_weights=log_weights, dropped_atoms=dropped_atoms)


def compound_path(locations: ArrayLike, log_weights: ArrayLike, construction: str) -> AtomicMeasure:
    """Path of nonnegative compound sums; zero-weight atoms are dropped and counted."""
    locations = np.asarray(locations, dtype=float)
    log_weights = np.asarray(log_weights, dtype=float)
    keep = np.isfinite(log_weights)
    dropped = int(locations.size - np.count_nonzero(keep))
    if dropped:
        logger.debug(f"{construction}: dropped {dropped} zero-weight atoms of {locations.size}")
    return AtomicMeasure(locations=locations[keep], log_weights=log_weights[keep], dropped_atoms=dropped)


def log_positive(values: NDArray) -> NDArray:
    """log of nonnegative values with log 0 = -inf."""
    with np.errstate(divide="ignore"):
        return np.log(values)


def check_count(name: str, value: Optional[int], minimum: int = 1) -> int:
    if value is None or int(value) != value or value < minimum:
        raise ParameterError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
