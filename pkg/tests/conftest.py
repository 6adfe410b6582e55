import pytest

from rankwitness.arith import QuadField
from rankwitness.catalog import load_catalog
from rankwitness.curve import CurveQ
from rankwitness.heegner import make_parametrization


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def e37():
    return CurveQ(-16, 16, 37, "37a-short")


@pytest.fixture(scope="session")
def table37(catalog):
    return catalog["37a-short"].table(200)


@pytest.fixture(scope="session")
def param37(catalog):
    return make_parametrization(catalog["37a-short"].table(200), 30)


@pytest.fixture(scope="session")
def k7():
    return QuadField(-7)
