"""
Base-measure construction, path evaluation and path/draw serialization.

JSON schema of a path: {"atoms": [{"loc": float, "w": float, "log_w": float}, ...]};
``log_w`` is optional on input. CSV schema: header ``loc,w``.
"""
from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence, Union
import json
import logging

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray
from pydantic import ValidationError

from app.adapters.base_measure_adapter import MixedBase, PiecewiseLinearBase, UniformBase
from app.errors import ParameterError
from app.models.measure_models import AtomicMeasure, BernoulliDraw, BetaProcessParams

logger = logging.getLogger(__name__)


def base_uniform01() -> UniformBase:
    """B0(x) = x on [0, 1]."""
    return UniformBase()


def uniform_base(mass: float = 1.0) -> UniformBase:
    try:
        return UniformBase(gamma=mass)
    except ValidationError as e:
        raise ParameterError(f"invalid base mass {mass!r}: {e.errors()[0]['msg']}") from e


def piecewise_linear_base(path: Union[str, Path], mass: float = 1.0) -> PiecewiseLinearBase:
    if not mass > 0:
        raise ParameterError(f"base mass must be positive, got {mass!r}")
    return PiecewiseLinearBase.from_csv(path, mass)


def atomic_eval(path: AtomicMeasure, x: ArrayLike) -> Union[float, NDArray]:
    """B(x) = sum of weights at locations <= x, elementwise in x."""
    order = np.argsort(path.locations, kind="stable")
    cumulative = np.concatenate([[0.0], np.cumsum(path.weights[order])])
    values = cumulative[np.searchsorted(path.locations[order], np.asarray(x, dtype=float), side="right")]
    return float(values) if np.ndim(values) == 0 else values


def mix_base(prior: BetaProcessParams, draws: Sequence[BernoulliDraw]):
    """
    Posterior base (c B0 + sum_i X_i) / (c + m) after m draws.

    Locations are grouped by exact equality. A prior that is already a
    posterior (mixed base with c = c0 + m0) is updated by merging counts, so
    batching the draws differently yields an equal measure.
    """
    if not draws:
        return prior.base

    base = prior.base
    if isinstance(base, MixedBase):
        if prior.c != base.concentration + base.observations:
            raise ParameterError(
                f"concentration {prior.c!r} does not match the mixed base "
                f"({base.concentration!r} + {base.observations} observations)"
            )
        continuous, c0, m0 = base.continuous, base.concentration, base.observations
        counts = Counter(dict(zip(base.atom_locations, base.atom_counts)))
    else:
        continuous, c0, m0 = base, prior.c, 0
        counts = Counter()

    for draw in draws:
        counts.update(draw.locations)
    locations = sorted(counts)
    logger.debug(f"posterior base: {len(draws)} draws, {len(locations)} distinct atoms")
    return MixedBase(
        continuous=continuous,
        concentration=c0,
        observations=m0 + len(draws),
        atom_locations=tuple(locations),
        atom_counts=tuple(counts[loc] for loc in locations),
    )


# --- Serialization ---------------------------------------------------------

def path_to_dict(path: AtomicMeasure) -> dict:
    return {
        "atoms": [
            {"loc": loc, "w": w, "log_w": lw}
            for loc, w, lw in zip(path.locations.tolist(), path.weights.tolist(), path.log_weights.tolist())
        ]
    }


def path_from_dict(data: dict) -> AtomicMeasure:
    try:
        atoms = data["atoms"]
        locations = [atom["loc"] for atom in atoms]
        if all("log_w" in atom for atom in atoms):
            return AtomicMeasure(locations=locations, log_weights=[atom["log_w"] for atom in atoms])
        return AtomicMeasure.from_weights(locations, [atom["w"] for atom in atoms])
    except (KeyError, TypeError, ValueError) as e:
        raise ParameterError(f"malformed path document: {e}") from e


def path_to_json(path: AtomicMeasure) -> str:
    return json.dumps(path_to_dict(path))


def path_from_json(text: str) -> AtomicMeasure:
    return path_from_dict(json.loads(text))


def paths_to_json(paths: Sequence[AtomicMeasure]) -> str:
    """One path as a path document, several as a JSON array of them."""
    if len(paths) == 1:
        return path_to_json(paths[0])
    return json.dumps([path_to_dict(p) for p in paths])


def paths_to_frame(paths: Sequence[AtomicMeasure]) -> pd.DataFrame:
    """``loc,w`` rows; several paths get a leading ``path`` index column."""
    frames = [pd.DataFrame({"loc": p.locations, "w": p.weights}) for p in paths]
    if len(frames) == 1:
        return frames[0]
    for i, frame in enumerate(frames):
        frame.insert(0, "path", i)
    return pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=["path", "loc", "w"])


def path_to_csv(path: AtomicMeasure) -> str:
    return paths_to_frame([path]).to_csv(index=False, float_format="%.17g")


def path_from_csv(source) -> AtomicMeasure:
    """Reads a ``loc,w`` table from a path or file-like object."""
    frame = pd.read_csv(source)
    if list(frame.columns[-2:]) != ["loc", "w"]:
        raise ParameterError(f"expected columns loc,w; got {','.join(map(str, frame.columns))}")
    return AtomicMeasure.from_weights(frame["loc"].to_numpy(), frame["w"].to_numpy())


def draws_to_json(draws: Iterable[BernoulliDraw]) -> str:
    return json.dumps([list(d.locations) for d in draws])


def draw_from_json(text: str) -> BernoulliDraw:
    return BernoulliDraw(locations=tuple(json.loads(text)))
