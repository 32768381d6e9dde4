"""
Almost-sure n-atom approximation.

Weights are mu_n^-1(Gamma_i / Gamma_{n+1}) for the arrival times of a unit
Poisson process; since mu_n is the upper tail of the finite-n beta law,
that is the beta quantile at 1 - Gamma_i / Gamma_{n+1}. Weights come out
strictly decreasing and converge atom by atom to the Ferguson-Klass jumps
as n grows.
"""
import logging
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.errors import ParameterError
from app.interfaces.sampler_interface import SamplerInterface
from app.models.measure_models import AtomicMeasure, BetaProcessParams
from app.samplers.sampler_utils import check_count, draw_locations, require_continuous, tail_spec, unit_weight_path
from app.utils.randgen import ArrivalTimes, RandomStream, arrival_times
from app.utils.special_fn import LevyTailSpec, beta_log_quantile, finite_shapes

logger = logging.getLogger(__name__)


def as_weights_from_arrivals(arrivals: ArrivalTimes, spec: LevyTailSpec, n: int) -> NDArray:
    """
    Log weights of the n-atom approximation from Gamma_1..Gamma_{n+1}.

    Only the first n + 1 arrival times are used.
    """
    if len(arrivals) < n + 1:
        raise ParameterError(f"need {n + 1} arrival times, got {len(arrivals)}")
    a, b = finite_shapes(spec, n)
    gammas = arrivals.gammas[: n + 1]
    last = gammas[n]
    tail = ArrivalTimes(gammas=gammas).tail_masses()[:n]
    return beta_log_quantile(tail / last, a, b, q=gammas[:n] / last)


def sample_as(
    params: BetaProcessParams,
    n: int,
    stream: RandomStream,
    locations: Optional[ArrayLike] = None,
) -> AtomicMeasure:
    """
    n atoms with strictly decreasing weights in (0, 1).

    ``locations`` replaces the location draws (used to compare constructions
    on shared atoms); the arrival times are always drawn first.
    """
    n = check_count("n", n)
    require_continuous(params, "as")
    spec = tail_spec(params)
    finite_shapes(spec, n)
    arrivals = arrival_times(stream, n + 1)
    log_w = as_weights_from_arrivals(arrivals, spec, n)
    if locations is None:
        locations = draw_locations(params.base, stream, n)
    elif np.size(locations) != n:
        raise ParameterError(f"expected {n} locations, got {np.size(locations)}")
    logger.debug(f"as: {n} atoms, smallest log weight {log_w[-1]:g}")
    return unit_weight_path(locations, log_w, "as")


class ASSampler(SamplerInterface):
    def sample(self, params: BetaProcessParams, stream: RandomStream) -> AtomicMeasure:
        return sample_as(params, self.spec.n, stream)
