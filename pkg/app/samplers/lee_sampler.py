"""
Importance-sampling approximation: n proposals x_i ~ Beta(eps, c), each kept
y_i ~ Poisson(gamma * b(x_i: 1, c) / (n * x_i * b(x_i: eps, c))) times,
giving the atom x_i * y_i at a base location. b(x: a, b) is the Beta(a, b)
density. Weights are compound and may exceed one.
"""
import logging
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from app.errors import ParameterError
from app.interfaces.sampler_interface import SamplerInterface
from app.models.measure_models import AtomicMeasure, BetaProcessParams
from app.samplers.sampler_utils import check_count, compound_path, draw_locations, log_positive, require_continuous
from app.utils.randgen import RandomStream

logger = logging.getLogger(__name__)

# numpy rejects larger Poisson means
_POISSON_MEAN_MAX = 1e18


def lee_log_poisson_rate(log_x: ArrayLike, c: float, gamma: float, n: int, epsilon: float) -> NDArray:
    """
    ln of the Poisson mean at proposal x, given ln x.

    The (1 - x)^(c - 1) factors of the two densities cancel, leaving
    gamma * c / (n * x^eps * B) with B = Gamma(eps + c) / (Gamma(eps) Gamma(c)).
    """
    log_x = np.asarray(log_x, dtype=float)
    log_norm = special.gammaln(epsilon + c) - special.gammaln(epsilon) - special.gammaln(c)
    return np.log(gamma) + np.log(c) - np.log(n) - epsilon * log_x - log_norm


def lee_poisson_rate(x: ArrayLike, c: float, gamma: float, n: int, epsilon: float) -> Union[float, NDArray]:
    rate = np.exp(lee_log_poisson_rate(np.log(np.asarray(x, dtype=float)), c, gamma, n, epsilon))
    return float(rate) if np.ndim(rate) == 0 else rate


def sample_lee(params: BetaProcessParams, n: int, epsilon: float, stream: RandomStream) -> AtomicMeasure:
    n = check_count("n", n)
    if epsilon is None or not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    require_continuous(params, "lee")

    locations = draw_locations(params.base, stream, n)
    log_x, _ = stream.log_beta(epsilon, params.c, n)
    log_rate = lee_log_poisson_rate(log_x, params.c, params.mass, n, epsilon)
    capped = log_rate > np.log(_POISSON_MEAN_MAX)
    if np.any(capped):
        logger.debug(f"lee: capped {int(capped.sum())} Poisson means at {_POISSON_MEAN_MAX:g}")
    y = stream.poisson(np.exp(np.minimum(log_rate, np.log(_POISSON_MEAN_MAX))))
    log_w = log_x + log_positive(y.astype(float))
    return compound_path(locations, log_w, "lee")


class LeeSampler(SamplerInterface):
    def sample(self, params: BetaProcessParams, stream: RandomStream) -> AtomicMeasure:
        return sample_lee(params, self.spec.n, self.spec.epsilon, stream)
