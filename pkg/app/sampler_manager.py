from typing import Any, Dict, Type
import logging

from pydantic import ValidationError

from app.errors import ParameterError
from app.interfaces.sampler_interface import SamplerInterface
from app.models.sampler_models import Algorithm, SamplerSpec
from app.samplers.as_sampler import ASSampler
from app.samplers.dls_sampler import DLSSampler
from app.samplers.fk_sampler import FKSampler
from app.samplers.lee_kim_sampler import LeeKimSampler
from app.samplers.lee_sampler import LeeSampler
from app.samplers.pc_sampler import PCSampler
from app.samplers.poisson_rep_sampler import PoissonRepSampler
from app.samplers.stick_sampler import StickSampler

logger = logging.getLogger(__name__)


_SAMPLER_CLASSES: Dict[Algorithm, Type[SamplerInterface]] = {
    Algorithm.PC: PCSampler,
    Algorithm.AS: ASSampler,
    Algorithm.FK: FKSampler,
    Algorithm.STICK: StickSampler,
    Algorithm.PREP5: PoissonRepSampler,
    Algorithm.PREP6: PoissonRepSampler,
    Algorithm.DLS: DLSSampler,
    Algorithm.LEE_KIM: LeeKimSampler,
    Algorithm.LEE: LeeSampler,
}

# --- Cached instances ---
# Samplers hold only their spec, so one instance per spec can serve every thread.
_sampler_instances: Dict[SamplerSpec, SamplerInterface] = {}


def build_spec(**fields: Any) -> SamplerSpec:
    """
    Validates sampler parameters, reporting problems as ParameterError.
    Unset (None) fields are ignored.
    """
    try:
        return SamplerSpec(**{k: v for k, v in fields.items() if v is not None})
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(loc) for loc in err['loc']) or 'spec'}: {err['msg']}" for err in e.errors()
        )
        raise ParameterError(f"invalid sampler parameters: {details}") from e


def get_sampler(spec: SamplerSpec) -> SamplerInterface:
    """
    Provides the sampler for ``spec``, creating it on first use.
    """
    sampler = _sampler_instances.get(spec)
    if sampler is None:
        try:
            cls = _SAMPLER_CLASSES[spec.algorithm]
        except KeyError:
            raise ParameterError(f"unknown algorithm {spec.algorithm!r}") from None
        logger.debug(f"Initializing sampler {cls.__name__} for {spec.describe()}")
        sampler = _sampler_instances.setdefault(spec, cls(spec))
    return sampler
