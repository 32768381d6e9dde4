"""
Increment sampler over a fixed partition w0 < w1 < ... < wm.

The increment on (w_{i-1}, w_i] is approximated by sum_j x_ij * y_ij with
x_ij ~ Beta(1, c) and y_ij | x_ij ~ Poisson(lambda_i / (n * x_ij)), where
lambda_i is the base mass of the cell; it is placed at the right endpoint.
"""
import logging
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from app.errors import ParameterError
from app.interfaces.base_measure_interface import BaseMeasureInterface
from app.interfaces.sampler_interface import SamplerInterface
from app.models.measure_models import AtomicMeasure, BetaProcessParams
from app.samplers.sampler_utils import check_count, compound_path, log_positive, require_continuous
from app.utils.randgen import RandomStream

logger = logging.getLogger(__name__)


def equal_mass_partition(base: BaseMeasureInterface, cells: int) -> NDArray:
    """Cut points at the base quantiles i / cells, i = 0..cells."""
    cells = check_count("partitions", cells)
    return np.asarray(base.quantile(np.arange(cells + 1) / cells), dtype=float)


def sample_dls(params: BetaProcessParams, partition: Sequence[float], n: int, stream: RandomStream) -> AtomicMeasure:
    """
    Raises:
        ParameterError: fewer than two cut points, or cut points not increasing.
    """
    n = check_count("n", n)
    require_continuous(params, "dls")
    cuts = np.asarray(partition, dtype=float).reshape(-1)
    if cuts.size < 2:
        raise ParameterError("dls needs a partition with at least one cell")
    if not np.all(np.diff(cuts) > 0):
        raise ParameterError("dls partition cut points must be strictly increasing")

    masses = np.diff(np.asarray(params.base.cdf(cuts), dtype=float))
    uncovered = params.mass - masses.sum()
    if uncovered > 1e-12 * params.mass:
        logger.debug(f"dls: partition leaves base mass {uncovered:g} uncovered")

    cells = cuts.size - 1
    log_x, _ = stream.log_beta(1.0, params.c, (cells, n))
    x = np.exp(log_x)
    y = stream.poisson(masses[:, None] / (n * x))
    increments = (x * y).sum(axis=1)
    return compound_path(cuts[1:], log_positive(increments), "dls")


class DLSSampler(SamplerInterface):
    def _partition(self, base: BaseMeasureInterface) -> NDArray:
        if self.spec.partition is not None:
            return np.asarray(self.spec.partition, dtype=float)
        return equal_mass_partition(base, self.spec.partitions)

    def sample(self, params: BetaProcessParams, stream: RandomStream) -> AtomicMeasure:
        return sample_dls(params, self._partition(params.base), self.spec.n, stream)
