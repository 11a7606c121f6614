import numpy as np
import pytest

from cprdyn.models import ConstantGreed, ModelSpec, SystemState


@pytest.fixture
def minimal_spec():
    """The workhorse parameterization: T=2, e_c=0.7, e_d=1.1, w=-1."""
    return ModelSpec(2.0, 0.7, 1.1, ConstantGreed(-1.0))


@pytest.fixture
def center():
    return SystemState(0.5, 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)
