"""
Two Poisson-process rewritings of the stick-breaking construction.

``eq5``: round i weights V * exp(-T) with V ~ Beta(1, c) and
T ~ Gamma(i - 1, rate c); round one has no T.
``eq6``: round i weights exp(-G_{i-1} / c) - exp(-G_i / c) where G_i is the
i-th arrival time of a per-atom unit Poisson process.

Both equal the stick-breaking law in distribution.
"""
import logging
from typing import Literal, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.errors import ParameterError
from app.interfaces.sampler_interface import SamplerInterface
from app.models.measure_models import AtomicMeasure, BetaProcessParams
from app.samplers.sampler_utils import draw_locations, require_continuous, unit_weight_path
from app.samplers.stick_sampler import resolve_rounds
from app.utils.randgen import RandomStream

logger = logging.getLogger(__name__)

Variant = Literal["eq5", "eq6"]


def poisson_rep_eq6_log_weight(previous: ArrayLike, increment: ArrayLike, c: float) -> NDArray:
    """ln(exp(-G / c) - exp(-(G + E) / c)) for arrival G and next increment E > 0."""
    previous = np.asarray(previous, dtype=float)
    increment = np.asarray(increment, dtype=float)
    return -previous / c + np.log(-np.expm1(-increment / c))


def poisson_rep_eq6_weight(previous: ArrayLike, increment: ArrayLike, c: float) -> Union[float, NDArray]:
    weight = np.exp(poisson_rep_eq6_log_weight(previous, increment, c))
    return float(weight) if np.ndim(weight) == 0 else weight


def _round_eq5(stream: RandomStream, i: int, count: int, c: float) -> NDArray:
    log_v, _ = stream.log_beta(1.0, c, count)
    if i == 1:
        return log_v
    return log_v - stream.gamma(i - 1.0, c, count)


def _round_eq6(stream: RandomStream, i: int, count: int, c: float) -> NDArray:
    previous = np.zeros(count) if i == 1 else stream.gamma(i - 1.0, 1.0, count)
    return poisson_rep_eq6_log_weight(previous, stream.exponential(count), c)


def sample_poisson_rep(
    params: BetaProcessParams,
    rounds: Optional[int],
    stream: RandomStream,
    variant: Variant = "eq5",
) -> AtomicMeasure:
    if variant not in ("eq5", "eq6"):
        raise ParameterError(f"unknown Poisson representation {variant!r}; expected 'eq5' or 'eq6'")
    require_continuous(params, "poisson_rep")
    rounds = resolve_rounds(params, rounds)
    draw_round = _round_eq5 if variant == "eq5" else _round_eq6

    log_w = []
    for i in range(1, rounds + 1):
        count = int(stream.poisson(params.mass))
        if count:
            log_w.append(draw_round(stream, i, count, params.c))

    if not log_w:
        return AtomicMeasure.empty()
    log_w = np.concatenate(log_w)
    locations = draw_locations(params.base, stream, log_w.size)
    logger.debug(f"poisson_rep/{variant}: {log_w.size} atoms over {rounds} rounds")
    return unit_weight_path(locations, log_w, f"poisson_rep/{variant}")


class PoissonRepSampler(SamplerInterface):
    def sample(self, params: BetaProcessParams, stream: RandomStream) -> AtomicMeasure:
        return sample_poisson_rep(params, self.spec.rounds, stream, self.spec.variant)
