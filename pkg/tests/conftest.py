"""Shared fixtures and hypothesis settings.

Dense linear algebra makes single examples slow, so the default profile
turns off hypothesis deadlines and keeps example counts modest.  Property
tests that carry an acceptance count (200 unitaries, 100 channels) set
`max_examples` themselves.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=30,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SQRT_HALF = 1.0 / np.sqrt(2.0)


@pytest.fixture
def rng():
    """A fixed generator so failures reproduce."""
    return np.random.default_rng(20240601)


@pytest.fixture
def plus_state():
    from gate_fidelity_lab.states import StateVector
    return StateVector([SQRT_HALF, SQRT_HALF])
