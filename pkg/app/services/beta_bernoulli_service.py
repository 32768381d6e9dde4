from typing import Sequence
import logging

import numpy as np

from app.adapters.base_measure_adapter import MixedBase
from app.errors import DomainError, ParameterError
from app.models.measure_models import AtomicMeasure, BernoulliDraw, BetaProcessParams
from app.samplers.as_sampler import sample_as
from app.services.measure_service import mix_base
from app.utils.randgen import RandomStream

logger = logging.getLogger(__name__)


def bep_draw(path: AtomicMeasure, stream: RandomStream) -> BernoulliDraw:
    """
    One Bernoulli-process draw: each atom is kept with probability equal to its weight.

    Raises:
        DomainError: a weight lies outside [0, 1].
    """
    weights = path.weights
    if np.any(weights > 1.0):
        raise DomainError(f"Bernoulli draws need weights in [0, 1]; largest is {weights.max()!r}")
    hits = stream.uniform(len(path)) < weights
    # a repeated location is one feature
    return BernoulliDraw(locations=tuple(dict.fromkeys(path.locations[hits].tolist())))


def posterior_update(prior: BetaProcessParams, draws: Sequence[BernoulliDraw]) -> BetaProcessParams:
    """
    Conjugate update: BP(c, B0) and m draws give BP(c + m, (c B0 + sum X_i) / (c + m)).
    """
    if not draws:
        return prior
    base = mix_base(prior, draws)
    return BetaProcessParams(c=base.concentration + base.observations, base=base)


def sample_posterior(post: BetaProcessParams, n: int, stream: RandomStream) -> AtomicMeasure:
    """
    Path of a posterior beta process.

    The continuous part of the base is sampled with the n-atom almost-sure
    construction; each observed location w with count k gets one fixed atom
    with weight Beta(k, c + m - k).

    Raises:
        ParameterError: n does not exceed the continuous mass.
        DomainError: a fixed atom would carry base mass >= 1.
    """
    base = post.base
    if not isinstance(base, MixedBase):
        return sample_as(post, n, stream)
    if post.c != base.denominator:
        raise ParameterError(f"posterior concentration {post.c!r} does not match c + m = {base.denominator!r}")

    continuous = sample_as(BetaProcessParams(c=post.c, base=base.continuous_part()), n, stream)
    log_w = []
    for loc, k in zip(base.atom_locations, base.atom_counts):
        rest = base.denominator - k
        if not rest > 0:
            raise DomainError(f"fixed atom at {loc!r} has base mass {k / base.denominator!r} >= 1")
        log_x, _ = stream.log_beta(float(k), rest)
        log_w.append(float(log_x))
    logger.debug(f"posterior path: {len(continuous)} continuous atoms, {len(log_w)} fixed atoms")
    return AtomicMeasure(
        locations=np.concatenate([continuous.locations, np.asarray(base.atom_locations, dtype=float)]),
        log_weights=np.concatenate([continuous.log_weights, np.asarray(log_w, dtype=float)]),
    )
