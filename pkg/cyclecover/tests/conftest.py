import pytest
from hypothesis import HealthCheck, settings

from cyclecover.schemas import EdgeColouring

from .strategies import rainbow

settings.register_profile(
    "cyclecover",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cyclecover")


@pytest.fixture
def mono_k4() -> EdgeColouring:
    return EdgeColouring.monochromatic(4)


@pytest.fixture
def rainbow_k4() -> EdgeColouring:
    return rainbow(4)
