import numpy as np
import pytest

from simtri.recursion import compute_h


@pytest.fixture(scope="session")
def htable_300():
    return compute_h(300)


@pytest.fixture(scope="session")
def htable_3000():
    return compute_h(3000)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
