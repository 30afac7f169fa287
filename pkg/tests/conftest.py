import math

import numpy as np
import pytest

from ptrobin import Grid


@pytest.fixture
def grid_pi() -> Grid:
    return Grid(math.pi, 512)


@pytest.fixture
def grid_pi_fine() -> Grid:
    return Grid(math.pi, 4096)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
