import numpy as np
import pytest

from gaborwf.signal import make_grid


@pytest.fixture(scope="session")
def grid1():
    return make_grid(1, 1024, 20.0)


@pytest.fixture(scope="session")
def grid2():
    return make_grid(2, 256, 10.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
