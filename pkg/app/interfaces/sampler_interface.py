from abc import ABC, abstractmethod

from app.models.measure_models import AtomicMeasure, BetaProcessParams
from app.models.sampler_models import SamplerSpec
from app.utils.randgen import RandomStream


class SamplerInterface(ABC):
    """
    Abstract interface for a beta-process path construction.
    """

    def __init__(self, spec: SamplerSpec):
        self.spec = spec

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec.describe()})"

    @abstractmethod
    def sample(self, params: BetaProcessParams, stream: RandomStream) -> AtomicMeasure:
        """
        Draws one path of BP(params.c, params.base).

        Args:
            params: Concentration and base measure.
            stream: Random stream owned by the caller for the duration of the call.

        Returns:
            The sampled path; equal (params, spec, stream seed) give an equal path.
        """
        pass
