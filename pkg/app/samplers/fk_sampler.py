import logging

from numpy.typing import NDArray

from app.interfaces.sampler_interface import SamplerInterface
from app.models.measure_models import AtomicMeasure, BetaProcessParams
from app.samplers.sampler_utils import check_count, draw_locations, require_continuous, tail_spec, unit_weight_path
from app.utils.randgen import ArrivalTimes, RandomStream, arrival_times
from app.utils.special_fn import LevyTailSpec, levy_tail_log_inverse

logger = logging.getLogger(__name__)


def fk_log_weights_from_arrivals(arrivals: ArrivalTimes, spec: LevyTailSpec) -> NDArray:
    """ln mu^-1(Gamma_i): the jumps in decreasing order."""
    return levy_tail_log_inverse(arrivals.gammas, spec)


def sample_fk(params: BetaProcessParams, jumps: int, stream: RandomStream) -> AtomicMeasure:
    """
    Ferguson-Klass series truncated after ``jumps`` terms.

    There is no default truncation; the caller chooses N.

    Raises:
        NumericError: the tail inversion failed to converge.
    """
    jumps = check_count("jumps", jumps)
    require_continuous(params, "fk")
    arrivals = arrival_times(stream, jumps)
    log_w = fk_log_weights_from_arrivals(arrivals, tail_spec(params))
    locations = draw_locations(params.base, stream, jumps)
    logger.debug(f"fk: {jumps} jumps, last arrival {arrivals.gammas[-1]:g}")
    return unit_weight_path(locations, log_w, "fk")


class FKSampler(SamplerInterface):
    def sample(self, params: BetaProcessParams, stream: RandomStream) -> AtomicMeasure:
        return sample_fk(params, self.spec.jumps, stream)
