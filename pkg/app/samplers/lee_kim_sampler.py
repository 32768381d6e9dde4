import logging

import numpy as np

from app.errors import ParameterError
from app.interfaces.sampler_interface import SamplerInterface
from app.models.measure_models import AtomicMeasure, BetaProcessParams
from app.samplers.sampler_utils import draw_locations, require_continuous, unit_weight_path
from app.utils.randgen import RandomStream

logger = logging.getLogger(__name__)


def sample_lee_kim(params: BetaProcessParams, epsilon: float, stream: RandomStream) -> AtomicMeasure:
    """
    Compound-Poisson approximation of the Lévy measure by (c / eps) b(s: eps, c):
    Poisson(c * gamma / eps) jumps of size Beta(eps, c) at sorted base locations.
    """
    if epsilon is None or not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    require_continuous(params, "leekim")
    count = int(stream.poisson(params.c * params.mass / epsilon))
    if count == 0:
        return AtomicMeasure.empty()
    locations = np.sort(draw_locations(params.base, stream, count), kind="stable")
    log_w, _ = stream.log_beta(epsilon, params.c, count)
    logger.debug(f"leekim: {count} jumps")
    return unit_weight_path(locations, log_w, "leekim")


class LeeKimSampler(SamplerInterface):
    def sample(self, params: BetaProcessParams, stream: RandomStream) -> AtomicMeasure:
        return sample_lee_kim(params, self.spec.epsilon, stream)
