"""
Stick-breaking construction: round i contributes C_i ~ Poisson(gamma) atoms,
each weighted V_i * prod_{l<i} (1 - V_l) with independent V ~ Beta(1, c).

The infinite sum over rounds is truncated; the expected mass left beyond
round R is gamma * (c / (c + 1))^R.
"""
import logging
import math
from typing import Optional

import numpy as np

from app.errors import ParameterError
from app.interfaces.sampler_interface import SamplerInterface
from app.models.measure_models import AtomicMeasure, BetaProcessParams
from app.samplers.sampler_utils import check_count, draw_locations, require_continuous, unit_weight_path
from app.settings import TRUNCATION_TOL
from app.utils.randgen import RandomStream

logger = logging.getLogger(__name__)


def default_rounds(c: float, gamma: float, tol: float = TRUNCATION_TOL) -> int:
    """Smallest R with gamma * (c / (c + 1))^R <= tol, at least one."""
    if not (c > 0 and gamma > 0 and tol > 0):
        raise ParameterError(f"default_rounds needs positive c, gamma, tol; got {c!r}, {gamma!r}, {tol!r}")
    if tol >= gamma:
        return 1
    return max(1, math.ceil(math.log(tol / gamma) / math.log(c / (c + 1.0))))


def resolve_rounds(params: BetaProcessParams, rounds: Optional[int]) -> int:
    if rounds is None:
        rounds = default_rounds(params.c, params.mass)
        logger.debug(f"using {rounds} stick-breaking rounds")
    return check_count("rounds", rounds)


def sample_stick(params: BetaProcessParams, rounds: Optional[int], stream: RandomStream) -> AtomicMeasure:
    require_continuous(params, "stick")
    rounds = resolve_rounds(params, rounds)
    c, gamma = params.c, params.mass

    log_w = []
    for i in range(1, rounds + 1):
        count = int(stream.poisson(gamma))
        if count == 0:
            continue
        log_v, _ = stream.log_beta(1.0, c, count)
        if i > 1:
            _, log_rest = stream.log_beta(1.0, c, (count, i - 1))
            log_v = log_v + log_rest.sum(axis=1)
        log_w.append(log_v)

    if not log_w:
        return AtomicMeasure.empty()
    log_w = np.concatenate(log_w)
    locations = draw_locations(params.base, stream, log_w.size)
    logger.debug(f"stick: {log_w.size} atoms over {rounds} rounds")
    return unit_weight_path(locations, log_w, "stick")


class StickSampler(SamplerInterface):
    def sample(self, params: BetaProcessParams, stream: RandomStream) -> AtomicMeasure:
        return sample_stick(params, self.spec.rounds, stream)
