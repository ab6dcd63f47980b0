import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "twk",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("twk")


@pytest.fixture
def rng():
    return random.Random(20240917)
