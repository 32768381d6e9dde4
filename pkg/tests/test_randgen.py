import numpy as np
import pytest
from pydantic import ValidationError
from scipy import stats

from app.errors import DomainError
from app.utils.randgen import (
    ArrivalTimes,
    BetaDist,
    GammaDist,
    arrival_times,
    derive_substream,
    make_stream,
    parse_dist,
    sample_dist,
)


def test_same_seed_same_draws():
    a = make_stream(7).uniform(100)
    b = make_stream(7).uniform(100)
    np.testing.assert_array_equal(a, b)


def test_different_seeds_differ():
    assert not np.array_equal(make_stream(1).uniform(20), make_stream(2).uniform(20))


def test_substreams_are_reproducible_on_their_own():
    direct = derive_substream(99, 5, salt=3).exponential(10)
    for index in range(5):
        derive_substream(99, index, salt=3).exponential(10)
    np.testing.assert_array_equal(direct, derive_substream(99, 5, salt=3).exponential(10))


def test_substreams_are_uncorrelated():
    a = derive_substream(2014, 0).uniform(20_000)
    b = derive_substream(2014, 1).uniform(20_000)
    c = derive_substream(2014, 0, salt=1).uniform(20_000)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.03
    assert abs(np.corrcoef(a, c)[0, 1]) < 0.03


@pytest.mark.parametrize("seed", [-1, 2 ** 64])
def test_seed_range(seed):
    with pytest.raises(DomainError):
        make_stream(seed)


def test_negative_substream_index():
    with pytest.raises(DomainError):
        derive_substream(1, -1)


def test_uniform_and_exponential_means():
    stream = make_stream(11)
    u = stream.uniform(100_000)
    assert np.all((u >= 0) & (u < 1))
    assert u.mean() == pytest.approx(0.5, abs=0.005)
    assert stream.exponential(100_000).mean() == pytest.approx(1.0, abs=0.02)


def test_poisson_zero_mean_is_zero():
    assert np.all(make_stream(3).poisson(0.0, 50) == 0)


def test_poisson_large_mean():
    draws = make_stream(3).poisson(1e6, 2000)
    assert draws.mean() == pytest.approx(1e6, rel=1e-3)


def test_beta_one_one_is_uniform():
    draws = make_stream(5).beta(1.0, 1.0, 20_000)
    assert stats.kstest(draws, "uniform").pvalue > 1e-3


@pytest.mark.parametrize("a, b", [(0.3, 2.0), (2.0, 5.0), (0.05, 0.05)])
def test_beta_matches_scipy(a, b):
    draws = make_stream(8).beta(a, b, 20_000)
    assert stats.kstest(draws, stats.beta(a, b).cdf).pvalue > 1e-3


def test_log_beta_parts_are_consistent():
    log_x, log_1mx = make_stream(4).log_beta(0.5, 3.0, 1000)
    np.testing.assert_allclose(np.exp(log_x) + np.exp(log_1mx), 1.0, rtol=1e-12)


def test_log_gamma_small_shape_stays_finite():
    draws = make_stream(6).log_gamma(1e-3, 5000)
    assert np.all(np.isfinite(draws))
    # most mass of Gamma(1e-3) lies far below the smallest double
    assert np.median(draws) < -300


@pytest.mark.parametrize("shape, rate", [(0.5, 1.0), (3.0, 2.0)])
def test_gamma_mean(shape, rate):
    draws = make_stream(10).gamma(shape, rate, 50_000)
    assert draws.mean() == pytest.approx(shape / rate, rel=0.03)


def test_parse_dist_builds_specs():
    assert parse_dist({"kind": "gamma", "shape": 0.5}) == GammaDist(shape=0.5)
    assert isinstance(parse_dist({"kind": "beta", "a": 1, "b": 2}), BetaDist)


@pytest.mark.parametrize(
    "data",
    [{"kind": "gamma", "shape": 0.0}, {"kind": "beta", "a": 1.0, "b": -1.0}, {"kind": "poisson", "mean": -1.0}, {"kind": "cauchy"}],
)
def test_parse_dist_rejects_bad_parameters(data):
    with pytest.raises(DomainError):
        parse_dist(data)


def test_sample_dist_dispatches():
    stream = make_stream(12)
    draws = sample_dist(stream, parse_dist({"kind": "poisson", "mean": 4.0}), size=10_000)
    assert draws.mean() == pytest.approx(4.0, rel=0.05)
    assert sample_dist(stream, parse_dist({"kind": "uniform"}), size=3).shape == (3,)


def test_arrival_times_increase():
    arrivals = arrival_times(make_stream(21), 1000)
    assert len(arrivals) == 1000
    assert np.all(np.diff(arrivals.gammas) > 0)


def test_arrival_times_follow_the_strong_law():
    n = 10 ** 5
    arrivals = arrival_times(make_stream(22), n + 1)
    assert 0.98 <= arrivals.gammas[n] / n <= 1.02


def test_arrival_times_are_read_only():
    arrivals = ArrivalTimes(gammas=[1.0, 2.0])
    with pytest.raises(ValueError):
        arrivals.gammas[0] = 0.5


@pytest.mark.parametrize("gammas", [[], [0.0, 1.0], [1.0, 1.0], [2.0, 1.0]])
def test_arrival_times_validation(gammas):
    with pytest.raises(ValidationError):
        ArrivalTimes(gammas=gammas)


def test_tail_masses():
    arrivals = ArrivalTimes(gammas=[1.0, 2.0, 3.0])
    np.testing.assert_allclose(arrivals.tail_masses(), [2.0, 1.0, 0.0])


def test_arrival_count_must_be_positive():
    with pytest.raises(DomainError):
        arrival_times(make_stream(1), 0)
