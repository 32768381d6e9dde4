import math

import numpy as np
import pytest
from scipy import stats

from app.errors import ParameterError
from app.models.measure_models import BernoulliDraw, BetaProcessParams
from app.models.sampler_models import Algorithm, SamplerSpec
from app.sampler_manager import build_spec, get_sampler
from app.samplers.as_sampler import as_weights_from_arrivals, sample_as
from app.samplers.dls_sampler import equal_mass_partition, sample_dls
from app.samplers.fk_sampler import fk_log_weights_from_arrivals, sample_fk
from app.samplers.lee_kim_sampler import sample_lee_kim
from app.samplers.lee_sampler import lee_poisson_rate, sample_lee
from app.samplers.pc_sampler import sample_pc
from app.samplers.poisson_rep_sampler import poisson_rep_eq6_weight, sample_poisson_rep
from app.samplers.stick_sampler import default_rounds, sample_stick
from app.services.measure_service import base_uniform01, mix_base
from app.utils.randgen import ArrivalTimes, make_stream
from app.utils.special_fn import LevyTailSpec

SMALL_SPECS = {
    "pc": dict(n=50),
    "as": dict(n=50),
    "fk": dict(jumps=50),
    "stick": dict(rounds=10),
    "prep5": dict(rounds=10),
    "prep6": dict(rounds=10),
    "dls": dict(n=20, partitions=20),
    "leekim": dict(epsilon=0.1),
    "lee": dict(n=50, epsilon=0.1),
}
UNIT_WEIGHT_ALGORITHMS = ("pc", "as", "fk", "stick", "prep5", "prep6", "leekim")


def small_spec(algorithm: str) -> SamplerSpec:
    return build_spec(algorithm=algorithm, **SMALL_SPECS[algorithm])


# --- samplers in general -------------------------------------------------------------

@pytest.mark.parametrize("algorithm", list(SMALL_SPECS))
def test_same_seed_same_path(prior, algorithm):
    sampler = get_sampler(small_spec(algorithm))
    assert sampler.sample(prior, make_stream(5)) == sampler.sample(prior, make_stream(5))


@pytest.mark.parametrize("algorithm", list(SMALL_SPECS))
def test_different_seeds_differ(prior, algorithm):
    sampler = get_sampler(small_spec(algorithm))
    assert sampler.sample(prior, make_stream(5)) != sampler.sample(prior, make_stream(6))


@pytest.mark.parametrize("algorithm", UNIT_WEIGHT_ALGORITHMS)
def test_unit_weight_ranges(prior, algorithm):
    sampler = get_sampler(small_spec(algorithm))
    for seed in range(20):
        path = sampler.sample(prior, make_stream(seed))
        assert np.all(np.isfinite(path.log_weights))
        assert np.all(path.log_weights <= 0)
        assert np.all((path.locations >= 0) & (path.locations <= 1))


@pytest.mark.parametrize("algorithm", ["dls", "lee"])
def test_compound_weights_are_positive(prior, algorithm):
    sampler = get_sampler(small_spec(algorithm))
    for seed in range(20):
        path = sampler.sample(prior, make_stream(seed))
        assert np.all(np.isfinite(path.log_weights))
        assert len(path) + path.dropped_atoms == (20 if algorithm == "dls" else 50)


@pytest.mark.parametrize("algorithm", list(SMALL_SPECS))
def test_mixed_base_is_rejected(prior, algorithm):
    posterior = BetaProcessParams(c=3.0, base=mix_base(prior, [BernoulliDraw(locations=(0.4,))]))
    with pytest.raises(ParameterError):
        get_sampler(small_spec(algorithm)).sample(posterior, make_stream(1))


def test_sampler_instances_are_cached():
    spec = small_spec("as")
    assert get_sampler(spec) is get_sampler(build_spec(algorithm="as", n=50))


@pytest.mark.parametrize(
    "fields",
    [
        dict(algorithm="fk"),
        dict(algorithm="pc"),
        dict(algorithm="dls", n=10),
        dict(algorithm="leekim", epsilon=1.5),
        dict(algorithm="lee", n=10, epsilon=0.0),
        dict(algorithm="stick", rounds=0),
        dict(algorithm="dls", n=5, partition=(0.0, 0.5, 0.5)),
        dict(algorithm="nope", n=5),
    ],
)
def test_invalid_specs(fields):
    with pytest.raises(ParameterError):
        build_spec(**fields)


def test_spec_describe():
    assert build_spec(algorithm="dls", n=200, partitions=200).describe() == "m=200, n=200"
    assert build_spec(algorithm="leekim", epsilon=0.01).describe() == "eps=0.01"
    assert build_spec(algorithm="stick").describe() == "default"
    assert build_spec(algorithm="prep6").variant == "eq6"
    assert build_spec(algorithm=Algorithm.AS, n=3).variant is None


# --- PC -------------------------------------------------------------------------------

def test_pc_shapes_one_one_give_uniform_weights(prior):
    weights = np.concatenate([sample_pc(prior, 2, make_stream(seed)).weights for seed in range(1000)])
    assert weights.size == 2000
    assert stats.kstest(weights, "uniform").pvalue > 1e-3


def test_pc_single_atom(make_prior):
    params = make_prior(c=2.0, mass=0.5)
    path = sample_pc(params, 1, make_stream(3))
    assert len(path) == 1


def test_pc_needs_more_atoms_than_mass(make_prior):
    with pytest.raises(ParameterError):
        sample_pc(make_prior(mass=2.0), 2, make_stream(1))


# --- AS / FK --------------------------------------------------------------------------

def test_as_weights_from_injected_arrivals():
    log_w = as_weights_from_arrivals(ArrivalTimes(gammas=[1.0, 2.0, 3.0]), LevyTailSpec(c=2.0, gamma=1.0), 2)
    np.testing.assert_allclose(np.exp(log_w), [2.0 / 3.0, 1.0 / 3.0], atol=1e-12)


def test_fk_weights_from_injected_arrivals():
    log_w = fk_log_weights_from_arrivals(ArrivalTimes(gammas=[1.0, 2.0]), LevyTailSpec(c=1.0, gamma=1.0))
    np.testing.assert_allclose(np.exp(log_w), [math.exp(-1.0), math.exp(-2.0)], atol=1e-9)


def test_as_and_fk_weights_strictly_decrease(prior):
    for seed in range(100):
        assert np.all(np.diff(sample_as(prior, 50, make_stream(seed)).log_weights) < 0)
        assert np.all(np.diff(sample_fk(prior, 50, make_stream(seed)).log_weights) < 0)


def test_fk_weights_decrease_for_a_large_concentration(make_prior):
    path = sample_fk(make_prior(c=1100.5), 5, make_stream(1))
    assert np.all(np.isfinite(path.log_weights))
    assert np.all(np.diff(path.log_weights) < 0)


def test_as_accepts_shared_locations(prior):
    locations = np.linspace(0.05, 0.95, 10)
    path = sample_as(prior, 10, make_stream(2), locations=locations)
    np.testing.assert_array_equal(path.locations, locations)
    with pytest.raises(ParameterError):
        sample_as(prior, 10, make_stream(2), locations=locations[:3])


def test_as_converges_to_fk_atom_by_atom():
    n = 100_000
    spec = LevyTailSpec(c=2.0, gamma=1.0)
    arrivals = ArrivalTimes(gammas=np.arange(1.0, n + 2.0))
    as_w = np.exp(as_weights_from_arrivals(arrivals, spec, n)[:10])
    fk_w = np.exp(fk_log_weights_from_arrivals(ArrivalTimes(gammas=np.arange(1.0, 11.0)), spec))
    np.testing.assert_allclose(as_w, fk_w, rtol=0, atol=1e-3)


def test_as_needs_more_atoms_than_mass(make_prior):
    with pytest.raises(ParameterError):
        sample_as(make_prior(mass=3.0), 3, make_stream(1))


# --- stick-breaking families ----------------------------------------------------------

def test_default_rounds():
    assert default_rounds(2.0, 1.0) == 35
    assert default_rounds(2.0, 1.0, tol=2.0) == 1
    with pytest.raises(ParameterError):
        default_rounds(0.0, 1.0)


def test_stick_with_tiny_mass_is_empty(make_prior):
    path = sample_stick(make_prior(mass=1e-12), 3, make_stream(4))
    assert len(path) == 0


def test_stick_first_round_weights_are_beta_one_c(make_prior):
    path = sample_stick(make_prior(c=2.0, mass=2000.0), 1, make_stream(9))
    assert len(path) > 1500
    assert stats.kstest(path.weights, stats.beta(1.0, 2.0).cdf).pvalue > 1e-3


def test_stick_uses_default_rounds(prior):
    assert len(sample_stick(prior, None, make_stream(10))) > 0


def test_eq6_weight_example():
    c = 2.0
    assert poisson_rep_eq6_weight(0.0, c * math.log(2.0), c) == pytest.approx(0.5, abs=1e-15)


def test_eq6_weights_are_positive_for_huge_arrivals():
    assert poisson_rep_eq6_weight(1e3, 1e-12, 1.0) == 0.0  # underflows as a double only
    assert 0.0 < poisson_rep_eq6_weight(10.0, 1e-12, 1.0) < 1e-12


@pytest.mark.parametrize("variant", ["eq5", "eq6"])
def test_poisson_rep_first_round_is_beta_one_c(make_prior, variant):
    path = sample_poisson_rep(make_prior(c=3.0, mass=2000.0), 1, make_stream(12), variant)
    assert stats.kstest(path.weights, stats.beta(1.0, 3.0).cdf).pvalue > 1e-3


def test_poisson_rep_unknown_variant(prior):
    with pytest.raises(ParameterError):
        sample_poisson_rep(prior, 3, make_stream(1), "eq7")


# --- DLS ------------------------------------------------------------------------------

def test_equal_mass_partition():
    np.testing.assert_allclose(equal_mass_partition(base_uniform01(), 4), [0.0, 0.25, 0.5, 0.75, 1.0])


def test_dls_zero_mass_cell_gets_no_weight(prior):
    for seed in range(20):
        path = sample_dls(prior, [0.0, 1.0, 2.0], 5, make_stream(seed))
        assert 2.0 not in path.locations.tolist()
        assert path.dropped_atoms >= 1


def test_dls_places_atoms_at_right_endpoints(prior):
    path = sample_dls(prior, [0.0, 0.5, 1.0], 200, make_stream(3))
    assert set(path.locations.tolist()) <= {0.5, 1.0}


def test_dls_rejects_bad_partitions(prior):
    with pytest.raises(ParameterError):
        sample_dls(prior, [0.5], 5, make_stream(1))
    with pytest.raises(ParameterError):
        sample_dls(prior, [0.0, 0.6, 0.3], 5, make_stream(1))


# --- Lee-Kim / Lee --------------------------------------------------------------------

def test_lee_kim_expected_atom_count(prior):
    counts = [len(sample_lee_kim(prior, 0.01, make_stream(seed))) for seed in range(200)]
    assert np.mean(counts) == pytest.approx(200.0, abs=5.0)


def test_lee_kim_locations_are_sorted(prior):
    path = sample_lee_kim(prior, 0.05, make_stream(8))
    assert np.all(np.diff(path.locations) >= 0)


@pytest.mark.parametrize("epsilon", [None, 0.0, 1.0])
def test_lee_kim_epsilon_range(prior, epsilon):
    with pytest.raises(ParameterError):
        sample_lee_kim(prior, epsilon, make_stream(1))


def test_lee_poisson_rate_matches_the_density_ratio():
    x, c, gamma, n, eps = 0.5, 2.0, 1.0, 200, 0.05
    expected = gamma * stats.beta.pdf(x, 1.0, c) / (n * x * stats.beta.pdf(x, eps, c))
    assert lee_poisson_rate(x, c, gamma, n, eps) == pytest.approx(expected, rel=1e-12)


def test_lee_with_no_kept_atoms_is_empty(make_prior):
    path = sample_lee(make_prior(mass=1e-12), 10, 0.5, make_stream(2))
    assert len(path) == 0
    assert path.dropped_atoms == 10


@pytest.mark.parametrize("epsilon", [None, -0.1, 1.0])
def test_lee_epsilon_range(prior, epsilon):
    with pytest.raises(ParameterError):
        sample_lee(prior, 10, epsilon, make_stream(1))
