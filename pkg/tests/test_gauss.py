import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thermoamoeba.algebra import LaurentPolynomial, evaluate
from thermoamoeba.errors import InputError, SingularPointError
from thermoamoeba.gauss import (
    DegenerateCriticalPointWarning,
    ProjectiveDirection,
    contour,
    directions_2d,
    graph_inverse_gauss,
    inverse_gauss,
    log_gauss,
    projective_distance,
    tangent_residual,
)


def test_log_gauss_on_line(line):
    d = log_gauss(line, [0.5, 0.5])
    assert projective_distance(d, [1, 1]) < 1e-14


def test_singular_point():
    # (z1 - z2)^2 is singular along the diagonal
    Q = LaurentPolynomial(2, {(2, 0): 1, (1, 1): -2, (0, 2): 1})
    with pytest.raises(SingularPointError):
        log_gauss(Q, [1.0, 1.0])


def test_projective_normalisation():
    d = ProjectiveDirection([2, -4])
    assert np.allclose(d.coords, [-0.5, 1])
    with pytest.raises(InputError):
        ProjectiveDirection([0, 0])


def test_inverse_gauss_closed_form(line):
    z = inverse_gauss(line, [1, 1], [0.3, 0.7])
    assert np.allclose(z, [0.5, 0.5], atol=1e-12)
    z = inverse_gauss(line, [2, 1], [0.3, 0.7])
    assert np.allclose(z, [2 / 3, 1 / 3], atol=1e-12)


@given(st.floats(0.05, np.pi - 0.05).filter(lambda a: abs(a - 3 * np.pi / 4) > 0.05))
def test_round_trip_on_line(a):
    q = np.array([np.cos(a), np.sin(a)])
    z = inverse_gauss(LaurentPolynomial(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1}), q, q / q.sum())
    Q = LaurentPolynomial(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1})
    assert projective_distance(log_gauss(Q, z), q) < 1e-8
    assert tangent_residual(Q, q, z) < 1e-8


def test_graph_inverse_gauss():
    f = LaurentPolynomial(1, {(0,): 1, (1,): 1, (2,): 1, (3,): 1})
    z = graph_inverse_gauss(f, [1.5], [0.8])
    assert z[0] == pytest.approx(1.0)
    f2 = LaurentPolynomial(1, {(0,): 1, (1,): 1})
    assert graph_inverse_gauss(f2, [0.5], [2.0])[0] == pytest.approx(1.0)


def test_degenerate_preimage_warns():
    # the binomial 1 - z1 z2 has a constant Gauss map
    Q = LaurentPolynomial(2, {(0, 0): 1, (1, 1): -1})
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        z = inverse_gauss(Q, [1, 1], [2.0, 0.5])
    assert abs(evaluate(Q, z)) < 1e-10
    assert any(issubclass(w.category, DegenerateCriticalPointWarning) for w in rec)


def test_contour_covers_all_directions(line):
    dirs = directions_2d(40)
    pts = contour(line, dirs)
    angles = {round(p.angle, 9) for p in pts}
    assert len(angles) == 40
    for p in pts:
        assert abs(evaluate(line, p.z)) < 1e-8


def test_contour_branch_ids_are_stable(cubic_graph):
    pts = contour(cubic_graph, directions_2d(30))
    assert pts
    for p in pts:
        assert projective_distance(log_gauss(cubic_graph, p.z), p.direction) < 1e-7
