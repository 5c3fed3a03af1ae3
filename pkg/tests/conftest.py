import numpy as np
import pytest
from hypothesis import settings

from src.soul.souls import soul_curvature
from src.zoo.catalog import get_entry, zoo_catalog

settings.register_profile("soulcurv", derandomize=True, deadline=None, max_examples=40)
settings.load_profile("soulcurv")

HOPF_SOUL_PARAM = np.array([0.8, 0.7])


@pytest.fixture(scope="session")
def catalog():
    return zoo_catalog()


@pytest.fixture(scope="session")
def hopf():
    return get_entry("hopf_example")


@pytest.fixture(scope="session")
def product():
    return get_entry("product_s2_r2")


@pytest.fixture(scope="session")
def hopf_soul_curvature(hopf):
    """(R in the adapted frame, adapted frame) at a generic Hopf soul point."""
    return soul_curvature(hopf.soul, HOPF_SOUL_PARAM)


@pytest.fixture(scope="session")
def product_soul_curvature(product):
    return soul_curvature(product.soul, np.array([1.0, 0.7]))
