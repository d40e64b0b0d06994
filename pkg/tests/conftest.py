import numpy as np
import pytest

from bcnfchaos import BcnfParams, certify

# The three reference parameter points used throughout (delta_L = delta_R = 0.3):
# A certifies with seed 0.25 and one-step words, B fails the expansion stage at
# seed 0.65, C certifies with seed 0.49 and two-step words.
POINT_A = BcnfParams(0.7, -1.4, 0.3, 0.3)
POINT_B = BcnfParams(0.7, -1.8, 0.3, 0.3)
POINT_C = BcnfParams(1.0, -2.0, 0.3, 0.3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260811)


@pytest.fixture(scope="session")
def cert_a():
    return certify(POINT_A)


@pytest.fixture(scope="session")
def cert_b():
    return certify(POINT_B)


@pytest.fixture(scope="session")
def cert_c():
    return certify(POINT_C)
