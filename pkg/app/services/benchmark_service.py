"""
Error-metric benchmark: M independent paths per construction, mean and sd of
B(x) on a grid, compared with the prior moments B0(x) and sqrt(B0(x) / (c + 1)).

Replication r of a construction always uses substream (salt, r) of the
master seed, so results do not depend on worker count or completion order.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional, Sequence
import logging
import time

import numpy as np
from pydantic import ValidationError

from app.errors import BetaProcessError, ParameterError
from app.interfaces.base_measure_interface import BaseMeasureInterface
from app.interfaces.sampler_interface import SamplerInterface
from app.models.bench_models import BenchConfig, BenchReport, BenchRow, GridMoments
from app.models.sampler_models import SamplerSpec
from app.sampler_manager import get_sampler
from app.services.measure_service import atomic_eval
from app.settings import ALGORITHM_SALTS
from app.utils.randgen import derive_substream
from app.utils.special_fn import finite_shapes, LevyTailSpec

logger = logging.getLogger(__name__)


def build_bench_config(**fields: Any) -> BenchConfig:
    """BenchConfig from keyword fields (None entries ignored), reporting problems as ParameterError."""
    try:
        return BenchConfig(**{k: v for k, v in fields.items() if v is not None})
    except ValidationError as e:
        details = "; ".join(f"{'.'.join(str(l) for l in err['loc']) or 'config'}: {err['msg']}" for err in e.errors())
        raise ParameterError(f"invalid benchmark configuration: {details}") from e


def _path_values(sampler: SamplerInterface, cfg: BenchConfig, salt: int, start: int, stop: int) -> np.ndarray:
    params = cfg.params
    grid = np.asarray(cfg.grid, dtype=float)
    block = np.empty((stop - start, grid.size))
    for r in range(start, stop):
        path = sampler.sample(params, derive_substream(cfg.master_seed, r, salt=salt))
        block[r - start] = atomic_eval(path, grid)
    return block


def path_values(spec: SamplerSpec, cfg: BenchConfig, sampler: Optional[SamplerInterface] = None) -> np.ndarray:
    """(paths, grid) array of B_r(x); row r comes from substream r whatever the worker count."""
    sampler = sampler or get_sampler(spec)
    salt = ALGORITHM_SALTS[spec.algorithm.value]
    workers = min(cfg.workers, cfg.paths)
    if workers == 1:
        return _path_values(sampler, cfg, salt, 0, cfg.paths)

    bounds = np.linspace(0, cfg.paths, workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        blocks = list(pool.map(lambda i: _path_values(sampler, cfg, salt, bounds[i], bounds[i + 1]), range(workers)))
    return np.concatenate(blocks, axis=0)


def moments_from_values(grid: Sequence[float], values: np.ndarray) -> GridMoments:
    values = np.asarray(values, dtype=float)
    paths = values.shape[0]
    mean = values.mean(axis=0)
    if paths > 1:
        sd, defined = values.std(axis=0, ddof=1), True
    else:
        sd, defined = np.zeros_like(mean), False
    return GridMoments(grid=tuple(grid), mean=tuple(mean.tolist()), sd=tuple(sd.tolist()), paths=paths, sd_defined=defined)


def empirical_moments(spec: SamplerSpec, cfg: BenchConfig, sampler: Optional[SamplerInterface] = None) -> GridMoments:
    """
    Sample mean and sd (denominator M - 1) of B(x) over cfg.paths paths.

    ``sampler`` overrides the one built from ``spec``; the spec still picks
    the substream salt.
    """
    moments = moments_from_values(cfg.grid, path_values(spec, cfg, sampler))
    if not moments.sd_defined:
        logger.warning("one sample path: standard deviation reported as 0")
    return moments


def exact_moments(base: BaseMeasureInterface, c: float, grid: Sequence[float]) -> GridMoments:
    """Prior moments: mean B0(x), sd sqrt(B0(x) / (c + 1))."""
    b0 = np.asarray(base.cdf(np.asarray(grid, dtype=float)), dtype=float)
    return GridMoments(
        grid=tuple(grid),
        mean=tuple(b0.tolist()),
        sd=tuple(np.sqrt(b0 / (c + 1.0)).tolist()),
        paths=1,
    )


def pc_exact_sd(base: BaseMeasureInterface, c: float, n: int, grid: Sequence[float]) -> np.ndarray:
    """
    Exact sd of the n-atom finite-dimensional path at each grid point.

    With q = B0(x) / gamma: Var = gamma q (1 + c gamma / n) / (c + 1) - gamma^2 q^2 / n.
    """
    gamma = base.mass
    finite_shapes(LevyTailSpec(c=c, gamma=gamma), n)
    q = np.asarray(base.cdf(np.asarray(grid, dtype=float)), dtype=float) / gamma
    var = gamma * q * (1.0 + c * gamma / n) / (c + 1.0) - gamma ** 2 * q ** 2 / n
    return np.sqrt(np.maximum(var, 0.0))


def max_mean_error(moments: GridMoments, base: BaseMeasureInterface) -> float:
    exact = np.asarray(base.cdf(np.asarray(moments.grid, dtype=float)), dtype=float)
    return float(np.max(np.abs(np.asarray(moments.mean) - exact)))


def max_sd_error(moments: GridMoments, c: float, base: BaseMeasureInterface) -> float:
    exact = np.sqrt(np.asarray(base.cdf(np.asarray(moments.grid, dtype=float)), dtype=float) / (c + 1.0))
    return float(np.max(np.abs(np.asarray(moments.sd) - exact)))


def run_comparison(cfg: BenchConfig) -> BenchReport:
    """
    One report row per configured construction. A failing construction is
    recorded in its row and the run continues. Wall time covers path
    generation and evaluation only.
    """
    report = BenchReport(c=cfg.c, mass=cfg.base.mass, grid=cfg.grid, paths=cfg.paths, master_seed=cfg.master_seed)
    for spec in cfg.samplers:
        start = time.perf_counter()
        try:
            moments = empirical_moments(spec, cfg)
            row = BenchRow(
                algorithm=spec.algorithm.value,
                params=spec.describe(),
                max_mean_error=max_mean_error(moments, cfg.base),
                max_sd_error=max_sd_error(moments, cfg.c, cfg.base),
            )
        except BetaProcessError as e:
            logger.error(f"{spec.algorithm.value} failed: {e}")
            row = BenchRow(algorithm=spec.algorithm.value, params=spec.describe(), error=str(e))
        except Exception as e:
            logger.exception(f"{spec.algorithm.value} failed unexpectedly: {e}")
            row = BenchRow(algorithm=spec.algorithm.value, params=spec.describe(), error=f"{type(e).__name__}: {e}")
        row.wall_time_s = time.perf_counter() - start
        logger.info(
            f"{row.algorithm} ({row.params}): mean err {row.max_mean_error}, sd err {row.max_sd_error}, "
            f"{row.wall_time_s:.2f}s"
        )
        report.rows.append(row)
    return report
