import pytest

from app.models.measure_models import BetaProcessParams
from app.services.measure_service import base_uniform01, uniform_base
from app.utils.randgen import RandomStream, make_stream


@pytest.fixture
def prior() -> BetaProcessParams:
    """BP(c=2, B0 = uniform on [0, 1])."""
    return BetaProcessParams(c=2.0, base=base_uniform01())


@pytest.fixture
def make_prior():
    def _make(c: float = 2.0, mass: float = 1.0) -> BetaProcessParams:
        return BetaProcessParams(c=c, base=uniform_base(mass))

    return _make


@pytest.fixture
def stream() -> RandomStream:
    return make_stream(12345)
