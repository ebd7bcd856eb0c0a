import math

import numpy as np
import pytest

from catalog import default_catalog
from geometry.decomposition import build_complex

N4_ENTRIES = ["N4-A1", "N4-A2", "N4-A2-d", "N4-A2-e", "N4-A1-rho", "N4-A2-b", "N4-A2-c", "N4-A2-f"]
N5_ENTRIES = ["N5-T1", "N5-T2", "N5-T3", "N5-T4", "N5-T3-a", "N5-T3-b", "N5-T3-d", "N5-T3-e"]


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def a1(catalog):
    return catalog.arrangement("N4-A1")


@pytest.fixture(scope="session")
def a2(catalog):
    return catalog.arrangement("N4-A2")


@pytest.fixture(scope="session")
def t1(catalog):
    return catalog.arrangement("N5-T1")


@pytest.fixture(scope="session")
def a1_complex(a1):
    return build_complex(a1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_deficits(rng, n):
    """Positive deficits summing to 2π"""
    weights = rng.uniform(0.5, 1.5, size=n)
    return weights / weights.sum() * 2 * math.pi
