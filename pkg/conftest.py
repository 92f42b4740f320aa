"""Shared fixtures for the test modules at the repository root."""

import numpy as np
import pytest

from bd_states import BDState, bell_projector, to_density_matrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def singlet():
    return BDState((0.0, 0.0, 0.0, 1.0))


@pytest.fixture
def singlet_matrix():
    return bell_projector(4)


@pytest.fixture
def worked_state():
    """p = (0.1, 0.1, 0.1, 0.7): entangled, concurrence 0.4."""
    return BDState((0.1, 0.1, 0.1, 0.7))


@pytest.fixture
def maximally_mixed():
    return BDState((0.25, 0.25, 0.25, 0.25))


@pytest.fixture
def maximally_mixed_matrix(maximally_mixed):
    return to_density_matrix(maximally_mixed)
