"""
Shared fixtures: tiny policy classes, context distributions and run streams.
"""
import numpy as np
import pytest

from src.core.rng import make_streams
from src.core.types import PolicyClass
from src.envs.contexts import ContextDistribution
from src.verify.checks import Instance


@pytest.fixture
def crossed_class():
    """Two policies over X=2, K=2 that always disagree."""
    return PolicyClass(np.array([[0, 1], [1, 0]]), 2)


@pytest.fixture
def four_policy_class():
    """Every lookup table over X=2, K=2."""
    return PolicyClass(np.array([[0, 0], [0, 1], [1, 0], [1, 1]]), 2)


@pytest.fixture
def uniform2():
    return ContextDistribution.uniform(2)


@pytest.fixture
def streams():
    return make_streams(0, 0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tiny_instance(crossed_class, uniform2):
    return Instance(crossed_class, uniform2, T=2, gamma=0.5)
