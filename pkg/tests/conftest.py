import os
import sys

import numpy as np
import pytest

# Add the project root directory to Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.polynomials.polynomial import Polynomial  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full verification corpus (deselect with -m 'not slow')")


@pytest.fixture
def rng():
    return np.random.default_rng(0x5EED)


@pytest.fixture
def z():
    return Polynomial.monomial(1)
