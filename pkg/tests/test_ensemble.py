import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thermoamoeba.algebra import LaurentPolynomial
from thermoamoeba.ensemble import (
    Spectrum,
    admissible,
    common_tangent,
    entropy_gradient_check,
    enumerate_states,
    exact_stats,
    occupations,
    partition_function,
    solve_mean_energy,
    theorem3_compare,
)
from thermoamoeba.errors import AdmissibilityError, BoundaryError, EmptyEnsembleError, InputError
from thermoamoeba.series import laurent_oracle

FERMI = Spectrum(1, ((0,), (1,)))
THREE = Spectrum(1, ((0,), (1,), (2,)))
PRODUCT = Spectrum(2, ((0, 0), (1, 0), (0, 1), (1, 1)))
PLANCK = Spectrum.from_energies(["1/2", "3/2"], recession=[(1,)])


def test_partition_functions():
    assert partition_function(FERMI) == LaurentPolynomial(1, {(0,): 1, (1,): 1})
    assert partition_function(THREE) == LaurentPolynomial(1, {(0,): 1, (1,): 1, (2,): 1})


def test_truncated_twin_spectrum_matches_rational_form():
    # 1 + (1 + z1^2 z2^2) z1^2 z2^2 / ((1 - z1^2 z2)(1 - z1 z2^2)) truncated to a box
    num = LaurentPolynomial(2, {(2, 2): 1, (4, 4): 1})
    den = LaurentPolynomial(2, {(0, 0): 1, (2, 1): -1, (1, 2): -1, (3, 3): 1})
    box = 8
    pts = {(0, 0)}
    for base in ((2, 2), (4, 4)):
        for a in range(box + 1):
            for b in range(box + 1):
                p = (base[0] + 2 * a + b, base[1] + a + 2 * b)
                if max(p) <= box:
                    pts.add(p)
    Z = partition_function(Spectrum(2, tuple(sorted(pts))))
    for i in range(box + 1):
        for j in range(box + 1):
            c = laurent_oracle(num, den, (0, 0), (i, j)) + (1 if (i, j) == (0, 0) else 0)
            assert Z.coefficient((i, j)) == c


def test_spectrum_validation():
    with pytest.raises(InputError):
        Spectrum(1, ((0,), (0,)))
    with pytest.raises(InputError):
        Spectrum(1, ())
    with pytest.raises(InputError):
        Spectrum.from_energies(["0", "1/2"])


def test_json_round_trip():
    s = json.dumps(PLANCK.to_json())
    assert Spectrum.from_json(s) == PLANCK
    assert json.loads(s)["shift"] == ["1/2"]


def test_fermi_symmetric():
    sol = solve_mean_energy(FERMI, [Fraction(1, 2)])
    assert sol.z[0] == pytest.approx(1)
    assert sol.S == pytest.approx(math.log(2))
    assert sol.infinite_temperature == [True]


def test_fermi_third():
    sol = solve_mean_energy(FERMI, [Fraction(1, 3)])
    assert sol.z[0] == pytest.approx(0.5, abs=1e-10)
    assert sol.S == pytest.approx(0.636514168, abs=1e-8)
    assert sol.T[0] == pytest.approx(1 / math.log(2))
    occ = occupations(FERMI, sol, 9)
    assert occ[0] == pytest.approx(6) and occ[1] == pytest.approx(3)


def test_three_level_symmetric():
    sol = solve_mean_energy(THREE, [1])
    assert sol.z[0] == pytest.approx(1)
    assert sol.S == pytest.approx(math.log(3))
    assert all(v == pytest.approx(1) for v in occupations(THREE, sol, 3).values())


def test_planck_shift_respected():
    sol = solve_mean_energy(Spectrum.from_energies(["1/2", "3/2", "5/2"]), ["3/2"])
    assert sol.z[0] == pytest.approx(1)


def test_gate_and_escape():
    with pytest.raises(AdmissibilityError):
        solve_mean_energy(FERMI, [2])
    with pytest.raises(BoundaryError):
        solve_mean_energy(FERMI, [1])
    with pytest.raises(BoundaryError):
        solve_mean_energy(PRODUCT, [Fraction(1, 2), 0])


def test_entropy_gradient():
    assert entropy_gradient_check(FERMI, [Fraction(1, 3)], 1e-4) <= 1e-6
    assert entropy_gradient_check(THREE, [Fraction(3, 2)], 1e-4) <= 1e-6


@given(st.fractions(Fraction(1, 50), Fraction(49, 50)), st.fractions(Fraction(1, 50), Fraction(49, 50)),
       st.integers(1, 50))
def test_occupation_constraints(u1, u2, N):
    sol = solve_mean_energy(PRODUCT, [u1, u2])
    occ = occupations(PRODUCT, sol, N)
    assert sum(occ.values()) == pytest.approx(N, rel=1e-9)
    for j, u in enumerate((u1, u2)):
        assert sum(a * PRODUCT.points[k][j] for k, a in occ.items()) == pytest.approx(N * float(u), abs=1e-9 * N)


def test_admissible_examples():
    assert admissible(FERMI, ["0.999"]) and not admissible(FERMI, [1])
    assert admissible(PLANCK, ["0.75"]) and not admissible(PLANCK, ["0.5"])


def test_twin_spectra_rhombus():
    # the two semigroup spectra and their common mean-energy region
    S1 = Spectrum(2, ((0, 0), (2, 1), (1, 2)), recession=((2, 1), (1, 2)))
    S2 = Spectrum.from_energies([(1, 1), (-1, 0), (0, -1)], recession=((-2, -1), (-1, -2)))
    u = [Fraction(1, 2), Fraction(1, 2)]
    assert admissible(S1, u) and admissible(S2, u)
    assert not admissible(S2, [2, 2])


def test_exact_stats_example():
    st_ = exact_stats(THREE, 3, [3])
    assert st_.total_states == 7
    assert [st_.averages[k] for k in range(3)] == [Fraction(6, 7), Fraction(9, 7), Fraction(6, 7)]


def test_fermi_single_collection():
    st_ = exact_stats(FERMI, 4, [2])
    assert st_.total_states == 6
    assert st_.averages == {0: 2, 1: 2}
    assert enumerate_states(FERMI, 4, [2]).total_states == 6


def test_single_system():
    for k, e in enumerate(THREE.points):
        st_ = exact_stats(THREE, 1, e)
        assert st_.averages[k] == 1 and sum(st_.averages.values()) == 1


def test_empty_ensembles():
    with pytest.raises(EmptyEnsembleError):
        exact_stats(THREE, 2, [5])
    with pytest.raises(EmptyEnsembleError):
        enumerate_states(THREE, 2, [5])
    with pytest.raises(EmptyEnsembleError):
        exact_stats(Spectrum(1, ((0,), (2,))), 2, [1])


@given(st.integers(1, 8), st.data())
def test_oracles_agree_and_constraints_close(N, data):
    S = data.draw(st.sampled_from([FERMI, THREE, PRODUCT, Spectrum(1, ((0,), (2,), (3,)))]))
    E = tuple(data.draw(st.integers(0, N * max(p[j] for p in S.points))) for j in range(S.n))
    try:
        a = exact_stats(S, N, E)
    except EmptyEnsembleError:
        with pytest.raises(EmptyEnsembleError):
            enumerate_states(S, N, E)
        return
    b = enumerate_states(S, N, E)
    assert a.total_states == b.total_states and a.averages == b.averages
    assert sum(a.averages.values()) == N
    for j in range(S.n):
        assert sum(v * S.points[k][j] for k, v in a.averages.items()) == E[j]


def test_entropy_matches_state_growth():
    sol = solve_mean_energy(THREE, [1])
    gaps = [abs(sol.S - math.log(exact_stats(THREE, N, [N]).total_states) / N) for N in (10, 40, 160)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_theorem3_product_spectrum_exact():
    rows = theorem3_compare(PRODUCT, [Fraction(1, 2)] * 2, [10])
    assert all(r.exact == Fraction(5, 2) and r.relative_error == pytest.approx(0, abs=1e-12) for r in rows)


def test_theorem3_requires_lattice():
    with pytest.raises(InputError):
        theorem3_compare(Spectrum(1, ((0,), (2,))), [1], [4])


def test_example_tangency():
    num = LaurentPolynomial(1, {(0,): 1, (1,): -1, (2,): 1})
    den = LaurentPolynomial(1, {(0,): 1, (1,): -1})
    u0, S0, z1, z2 = common_tangent(num, den, (0.05, 0.95), (1.05, 20), (0.1, 0.9))
    assert u0 == pytest.approx(0.5, abs=1e-9)
    assert z1 == pytest.approx((3 - 5**0.5) / 2) and z2 == pytest.approx((3 + 5**0.5) / 2)
