import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from superdisc.supermatrix import SpaceShape  # noqa: E402


@pytest.fixture
def shape():
    return SpaceShape(3, 3, 2, 2)


@pytest.fixture
def small_shape():
    return SpaceShape(2, 1, 1, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

