import numpy as np
import pytest

from ewt import Segmentation


def rel_l2(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def random_segmentation(rng, max_channels=10):
    """Random valid segmentation with 1..max_channels bands."""
    C = int(rng.integers(1, max_channels + 1))
    internal = np.sort(rng.uniform(0.05, np.pi - 0.05, size=C - 1))
    while C > 1 and np.any(np.diff(internal) < 1e-3):
        internal = np.sort(rng.uniform(0.05, np.pi - 0.05, size=C - 1))
    return Segmentation(np.concatenate(([0.0], internal, [np.pi])))


@pytest.fixture
def rng():
    return np.random.default_rng(20130201)


@pytest.fixture
def four_band_segmentation():
    return Segmentation([0.0, 1.5, 2.0, 2.8, np.pi])
