import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thermoamoeba.algebra import LaurentPolynomial, evaluate
from thermoamoeba.amoeba import (
    Verdict,
    duplicate_orders,
    find_components,
    membership,
    order,
    render2d,
    vertex_components,
)
from thermoamoeba.errors import OrderError


def test_orders_of_four_component(four_component):
    assert order(four_component, [0, 0]) == (1, 1)
    assert order(four_component, [-3, -3]) == (0, 0)


def test_vertex_components_verified(four_component):
    comps = vertex_components(four_component)
    assert {c.vertex for c in comps} == {(0, 0), (2, 1), (1, 2)}
    assert all(c.verified for c in comps)


def test_order_inside_amoeba_raises(line):
    with pytest.raises(OrderError):
        order(line, [0.0, 0.0])


def test_line_amoeba_orders(line):
    assert order(line, [-2, -2]) == (0, 0)
    assert order(line, [2, 0]) == (1, 0)
    assert order(line, [0, 2]) == (0, 1)


def test_membership_with_witness(line):
    m = membership(line, [0.0, 0.0])
    assert m.verdict is Verdict.INSIDE
    assert abs(evaluate(line, m.witness)) < 1e-8
    assert np.allclose(np.log(np.abs(m.witness)), [0, 0], atol=1e-8)
    out = membership(line, [-2.0, -2.0])
    assert out.verdict is Verdict.OUTSIDE and out.order == (0, 0)


@given(st.floats(-3, 3), st.floats(0, 2 * np.pi))
def test_points_of_the_curve_are_inside(t, phi):
    # z1 = e^{t + i phi}, z2 = 1 - z1 lies on the line
    z1 = np.exp(t + 1j * phi)
    z2 = 1 - z1
    if abs(z2) < 1e-3:
        return
    m = membership(LaurentPolynomial(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1}),
                   np.log(np.abs([z1, z2])), phase_samples=64)
    assert m.verdict is not Verdict.OUTSIDE


@given(st.floats(-4, 4), st.floats(-4, 4))
def test_order_lies_in_newton_polytope(x1, x2):
    Q = LaurentPolynomial(2, {(2, 1): 1, (1, 1): -4, (1, 2): 1, (0, 0): 1})
    try:
        o = order(Q, [x1, x2])
    except OrderError:
        return
    assert o in {(0, 0), (1, 1), (2, 1), (1, 2)}


def test_components_on_coarse_grid(four_component):
    axes = [np.linspace(-4, 4, 30)] * 2
    comps = find_components(four_component, axes)
    assert not duplicate_orders(comps)
    orders = {c.order for c in comps}
    assert orders == {(0, 0), (1, 1), (1, 2), (2, 1)}
    assert [c.bounded for c in comps if c.order == (1, 1)] == [True]


def test_render_deterministic_across_workers(four_component):
    a = render2d(four_component, (-2, 2), 20, 32, workers=1)
    b = render2d(four_component, (-2, 2), 20, 32, workers=4)
    assert np.array_equal(a.points, b.points)
    # each x1 and phase contributes deg_z2 = 2 points
    assert a.points.shape == (20 * 32 * 2, 2)
