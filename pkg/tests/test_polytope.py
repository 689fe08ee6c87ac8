import json
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from thermoamoeba.errors import InputError
from thermoamoeba.polytope import (
    Polyhedron,
    as_vector,
    contains_interior,
    contains_interior_lp,
    dual_cone_at,
    generates_lattice,
    hull,
)

FOUR_COMPONENT = [(2, 1), (1, 1), (1, 2), (0, 0)]
pts2 = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=8, unique=True)


def _vset(P):
    return {tuple(int(c) for c in v) for v in P.vertices}


def test_four_component_vertices():
    P = hull(FOUR_COMPONENT)
    assert _vset(P) == {(0, 0), (1, 2), (2, 1)}
    assert P.dim == 2
    assert contains_interior(P, (1, 1))
    assert not contains_interior(P, (0, 0))


def test_dual_cone_at_origin():
    C = dual_cone_at(hull(FOUR_COMPONENT), (0, 0))
    # directions maximised at the origin: negative pairing with both edges
    assert C.contains((-1, -1))
    assert not C.contains((1, 0))
    assert C.contains_interior((-1, -1))
    assert not C.contains_interior((-2, 1))


def test_planck_with_recession():
    P = hull([(Fraction(1, 2),)], recession=[(1,)])
    assert contains_interior(P, (Fraction(3, 4),))
    assert not contains_interior(P, (Fraction(1, 2),))
    assert P.contains((Fraction(1, 2),))


def test_lower_dimensional_hull_has_no_interior():
    P = hull([(0, 0), (1, 1), (2, 2)])
    assert P.dim == 1
    assert not contains_interior(P, (1, 1))


def test_json_round_trip():
    P = hull(FOUR_COMPONENT)
    Q = Polyhedron.from_json(json.loads(json.dumps(P.to_json())))
    assert _vset(Q) == _vset(P)


def test_rational_strings():
    assert as_vector(["1/2", "3"]) == (Fraction(1, 2), Fraction(3))


def test_generates_lattice():
    assert generates_lattice([(0,), (1,)])
    assert not generates_lattice([(0,), (2,), (4,)])
    assert generates_lattice([(0,), (2,), (3,)])
    assert generates_lattice([(0, 0), (1, 1), (2, 1), (1, 2)])
    assert not generates_lattice([(0, 0), (2, 0), (0, 2)])
    assert generates_lattice([(0, 0), (1, 0), (0, 1), (1, 1)])


@given(pts2)
def test_hull_contains_its_points_and_vertices_are_input_points(points):
    try:
        P = hull(points)
    except InputError:
        return
    for p in points:
        assert P.contains(p)
    assert _vset(P) <= set(points)


@given(pts2, st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_exact_and_lp_interior_agree(points, u):
    try:
        P = hull(points)
    except InputError:
        return
    assert contains_interior(P, u) == contains_interior_lp(points, u)


@given(pts2)
def test_every_vertex_maximises_its_dual_cone_direction(points):
    try:
        P = hull(points)
    except InputError:
        return
    if P.dim < 2:
        return
    for v in P.vertices:
        s = dual_cone_at(P, v).interior_direction()
        best = max(sum(a * b for a, b in zip(s, p)) for p in points)
        assert sum(a * b for a, b in zip(s, v)) == best
