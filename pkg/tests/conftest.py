import numpy as np
import pytest

from bochnerkit.curvature import flat_point, random_hermitian_point


@pytest.fixture
def flat6():
    return flat_point(6)


@pytest.fixture
def flat4():
    return flat_point(4)


@pytest.fixture
def skew_point6():
    """A valid point in non-orthonormal coordinates (exercises metric raising)."""
    return random_hermitian_point(6, seed=42)


def unit_vector(point, rng):
    v = rng.standard_normal(point.dim)
    return v / np.sqrt(float(v @ point.g_mat @ v))
