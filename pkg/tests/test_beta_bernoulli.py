import numpy as np
import pytest

from app.errors import DomainError, ParameterError
from app.models.measure_models import AtomicMeasure, BernoulliDraw, BetaProcessParams
from app.samplers.as_sampler import sample_as
from app.services.beta_bernoulli_service import bep_draw, posterior_update, sample_posterior
from app.utils.randgen import make_stream


def draws(*location_sets):
    return [BernoulliDraw(locations=tuple(s)) for s in location_sets]


def test_degenerate_weights():
    path = AtomicMeasure.from_weights([0.1, 0.2, 0.3], [1.0, 0.0, 1.0])
    stream = make_stream(1)
    for _ in range(100):
        assert bep_draw(path, stream).locations == (0.1, 0.3)


def test_empty_path_gives_empty_draw():
    assert len(bep_draw(AtomicMeasure.empty(), make_stream(1))) == 0


def test_inclusion_frequency():
    path = AtomicMeasure.from_weights([0.5], [0.3])
    stream = make_stream(2)
    hits = sum(len(bep_draw(path, stream)) for _ in range(10_000))
    assert hits / 10_000 == pytest.approx(0.3, abs=0.02)


def test_weights_above_one_are_rejected():
    with pytest.raises(DomainError):
        bep_draw(AtomicMeasure.from_weights([0.5], [1.5]), make_stream(1))


def test_draw_locations_come_from_the_path(prior):
    stream = make_stream(3)
    path = sample_as(prior, 200, stream)
    for _ in range(20):
        assert set(bep_draw(path, stream).locations) <= set(path.locations.tolist())


def test_repeated_locations_are_one_feature():
    path = AtomicMeasure.from_weights([0.5, 0.5], [1.0, 1.0])
    assert bep_draw(path, make_stream(1)).locations == (0.5,)


def test_posterior_without_draws_is_the_prior(prior):
    assert posterior_update(prior, []) is prior


def test_posterior_single_draw(prior):
    post = posterior_update(prior, draws([0.4]))
    assert post.c == 3.0
    assert post.base.continuous_part().mass == pytest.approx(2.0 / 3.0)
    assert post.base.atom_locations == (0.4,)
    assert post.base.atom_masses == pytest.approx((1.0 / 3.0,))


def test_posterior_atom_mass_counts_draws(make_prior):
    post = posterior_update(make_prior(c=1.0), draws([0.2], [0.2, 0.7], [0.2], []))
    assert post.c == 5.0
    assert dict(zip(post.base.atom_locations, post.base.atom_masses))[0.2] == pytest.approx(3.0 / 5.0)


def test_posterior_update_is_associative(prior):
    observed = draws([0.1, 0.4], [0.4], [], [0.9, 0.1], [0.4, 0.6])
    once = posterior_update(prior, observed)
    for split in range(1, len(observed)):
        twice = posterior_update(posterior_update(prior, observed[:split]), observed[split:])
        assert twice == once


def test_posterior_without_observations_samples_the_prior(prior):
    assert sample_posterior(prior, 50, make_stream(4)) == sample_as(prior, 50, make_stream(4))


def test_fixed_atom_weight_mean(prior):
    post = posterior_update(prior, draws([0.4]))
    stream = make_stream(5)
    weights = []
    for _ in range(10_000):
        path = sample_posterior(post, 10, stream)
        weights.append(path.weights[path.locations == 0.4][-1])
    # Beta(1, 2)
    assert np.mean(weights) == pytest.approx(1.0 / 3.0, abs=0.02)


def test_posterior_path_mean_mass(prior):
    post = posterior_update(prior, draws([0.4], [0.4, 0.8]))
    stream = make_stream(6)
    masses = [sample_posterior(post, 100, stream).total_mass for _ in range(2000)]
    assert np.mean(masses) == pytest.approx(post.base.mass, abs=0.05)


def test_posterior_concentration_must_match(prior):
    post = posterior_update(prior, draws([0.4]))
    with pytest.raises(ParameterError):
        sample_posterior(BetaProcessParams(c=2.0, base=post.base), 10, make_stream(1))
