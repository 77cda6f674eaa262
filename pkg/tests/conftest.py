import numpy as np
import pytest

from balanced3body import MassTriple, lift_family, trace_families


@pytest.fixture(scope="session")
def m321():
    return MassTriple(3, 2, 1).normalized()


@pytest.fixture(scope="session")
def families321(m321):
    return {f.family_id: f for f in trace_families(m321)}


@pytest.fixture(scope="session")
def lifted321(families321):
    return {k: lift_family(f) for k, f in families321.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
