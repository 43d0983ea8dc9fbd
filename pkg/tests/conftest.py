import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from nevanlinna import differentiate, lacunary_witness, WitnessSpec  # noqa: E402


@pytest.fixture(scope="session")
def witness20():
    return lacunary_witness(WitnessSpec(20))


@pytest.fixture(scope="session")
def witness20_prime(witness20):
    return differentiate(witness20)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
