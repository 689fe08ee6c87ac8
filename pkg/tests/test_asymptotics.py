import math

import numpy as np
import pytest

from thermoamoeba.algebra import LaurentPolynomial
from thermoamoeba.asymptotics import compare, estimate, loglog_slope, phase_hessian
from thermoamoeba.errors import DegenerateSaddleError, InputError


def test_saddle_and_constant_for_binomials(line, one2):
    est = estimate(one2, line, (1, 1))
    assert np.allclose(est.z_q, [0.5, 0.5], atol=1e-12)
    assert est.C_q.real == pytest.approx(1 / math.sqrt(math.pi), rel=1e-6)
    assert est.checks["on_component_boundary"]


def test_hessian_value(line):
    H = phase_hessian(line, np.array([1.0, 1.0]), np.array([0.5, 0.5]))
    assert H.matrix.shape == (1, 1)
    assert H.matrix[0, 0].real == pytest.approx(-2, rel=1e-5)


def test_numerator_scales_constant(line):
    z1 = LaurentPolynomial.monomial((1, 0))
    est = estimate(z1, line, (1, 1))
    assert est.C_q.real * math.sqrt(math.pi) == pytest.approx(0.5, rel=1e-6)


def test_one_variable_geometric_is_exact():
    P = LaurentPolynomial.constant(1, 1)
    Q = LaurentPolynomial(1, {(0,): 1, (1,): -2})
    rows = compare(P, Q, (1,), [1, 5, 20])
    for _, exact, _, r in rows:
        assert r == pytest.approx(1, abs=1e-12)


def test_off_diagonal_direction(line, one2):
    # c_{(2k, k)} = binom(3k, k)
    rows = compare(one2, line, (2, 1), [20, 40, 80])
    errs = [abs(r[3] - 1) for r in rows]
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] < 0.01


def test_darwin_fowler_kernel():
    # 1/(1 - w(1 + z)): diagonal (k, 2k) counts binom(2k, k)
    one = LaurentPolynomial.constant(2, 1)
    Q = LaurentPolynomial(2, {(0, 0): 1, (0, 1): -1, (1, 1): -1})
    rows = compare(one, Q, (1, 2), [10, 20, 40])
    assert abs(rows[-1][3] - 1) < abs(rows[0][3] - 1) < 0.05


def test_non_morse_saddle_rejected(one2):
    Q = LaurentPolynomial(2, {(0, 0): 1, (1, 1): -1})
    with pytest.raises(DegenerateSaddleError):
        estimate(one2, Q, (1, 1))


def test_bad_direction(line, one2):
    with pytest.raises(InputError):
        estimate(one2, line, (0, 0))


def test_slope_of_synthetic_rows():
    rows = [(k, None, None, 1 + 1 / k) for k in (10, 20, 40, 80)]
    assert loglog_slope(rows) == pytest.approx(-1)
