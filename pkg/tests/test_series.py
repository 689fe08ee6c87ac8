from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thermoamoeba.algebra import LaurentPolynomial
from thermoamoeba.errors import InputError, TruncationError
from thermoamoeba.series import TruncatedSeries, laurent_oracle, series_power, taylor_coefficients


def test_power_of_trinomial():
    Z = TruncatedSeries(1, (6,), {(0,): 1, (1,): 1, (2,): 1})
    assert series_power(Z, 3).coeff((3,)) == 7


def test_coefficient_outside_box_raises():
    Z = TruncatedSeries(1, (2,), {(0,): 1})
    with pytest.raises(TruncationError):
        Z.coeff((3,))
    assert Z.coeff((-1,)) == 0


@given(st.integers(0, 12), st.integers(0, 12))
def test_power_matches_binomial(N, k):
    Z = TruncatedSeries(1, (12,), {(0,): 1, (1,): 1})
    assert series_power(Z, N).coeff((k,)) == comb(N, k)


def test_oracle_central_binomial(line, one2):
    assert laurent_oracle(one2, line, (0, 0), (2, 2)) == 6


def test_series_division_route_agrees(line, one2):
    T = taylor_coefficients(one2, line, (6, 6))
    for a in range(7):
        for b in range(7):
            assert T.coeff((a, b)) == comb(a + b, a)
            assert laurent_oracle(one2, line, (0, 0), (a, b)) == comb(a + b, a)


def test_expansion_at_other_vertex():
    # 1/(1 - z) expanded where |z| > 1: -z^{-1} - z^{-2} - ...
    P = LaurentPolynomial.constant(1, 1)
    Q = LaurentPolynomial(1, {(0,): 1, (1,): -1})
    assert laurent_oracle(P, Q, (1,), (-1,)) == -1
    assert laurent_oracle(P, Q, (1,), (-4,)) == -1
    assert laurent_oracle(P, Q, (1,), (0,)) == 0


def test_rational_coefficients_stay_exact():
    P = LaurentPolynomial.constant(1, 1)
    Q = LaurentPolynomial(1, {(0,): 2, (1,): -1})
    assert laurent_oracle(P, Q, (0,), (3,)) == Fraction(1, 16)


def test_non_vertex_rejected(four_component):
    with pytest.raises(InputError):
        laurent_oracle(LaurentPolynomial.constant(2, 1), four_component, (1, 1), (0, 0))


def test_box_limits_reach(line, one2):
    with pytest.raises(TruncationError):
        laurent_oracle(one2, line, (0, 0), (5, 5), box=(3, 3))
