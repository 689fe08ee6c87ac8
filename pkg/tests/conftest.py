import pytest
from hypothesis import HealthCheck, settings

from thermoamoeba.algebra import LaurentPolynomial

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def four_component():
    """z1^2 z2 - 4 z1 z2 + z1 z2^2 + 1, the four-component example."""
    return LaurentPolynomial(2, {(2, 1): 1, (1, 1): -4, (1, 2): 1, (0, 0): 1})


@pytest.fixture
def line():
    return LaurentPolynomial(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1})


@pytest.fixture
def cubic_graph():
    """w - (1 + z + z^2 + z^3) in variables (z, w)."""
    return LaurentPolynomial(2, {(0, 1): 1, (0, 0): -1, (1, 0): -1, (2, 0): -1, (3, 0): -1})


@pytest.fixture
def one2():
    return LaurentPolynomial.constant(2, 1)
