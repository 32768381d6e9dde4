import logging

from app.interfaces.sampler_interface import SamplerInterface
from app.models.measure_models import AtomicMeasure, BetaProcessParams
from app.samplers.sampler_utils import check_count, draw_locations, require_continuous, tail_spec, unit_weight_path
from app.utils.randgen import RandomStream
from app.utils.special_fn import finite_shapes

logger = logging.getLogger(__name__)


def sample_pc(params: BetaProcessParams, n: int, stream: RandomStream) -> AtomicMeasure:
    """
    Finite-dimensional approximation: n atoms with i.i.d. weights
    Beta(c*gamma/n, c*(1 - gamma/n)) at i.i.d. locations from base / gamma.

    Raises:
        ParameterError: n <= gamma or the base has atoms.
    """
    n = check_count("n", n)
    require_continuous(params, "pc")
    a, b = finite_shapes(tail_spec(params), n)
    log_w, _ = stream.log_beta(a, b, n)
    locations = draw_locations(params.base, stream, n)
    logger.debug(f"pc: {n} atoms with shapes ({a:g}, {b:g})")
    return unit_weight_path(locations, log_w, "pc")


class PCSampler(SamplerInterface):
    def sample(self, params: BetaProcessParams, stream: RandomStream) -> AtomicMeasure:
        return sample_pc(params, self.spec.n, stream)
