"""Amoebas, logarithmic Gauss maps, diagonal coefficient asymptotics and Darwin-Fowler ensembles."""

from .algebra import LaurentPolynomial, evaluate, partial, theta
from .amoeba import find_components, membership, order, render2d, vertex_components
from .asymptotics import compare, estimate
from .ensemble import (
    Spectrum,
    admissible,
    enumerate_states,
    exact_stats,
    occupations,
    partition_function,
    solve_mean_energy,
    theorem3_compare,
)
from .errors import AmoebaError, InputError, NumericalError
from .gauss import inverse_gauss, log_gauss
from .polytope import Polyhedron, dual_cone_at, hull
from .series import TruncatedSeries, laurent_oracle, series_power

__version__ = "0.1.0"

__all__ = [
    "AmoebaError", "InputError", "LaurentPolynomial", "NumericalError", "Polyhedron", "Spectrum",
    "TruncatedSeries", "admissible", "compare", "dual_cone_at", "enumerate_states", "estimate",
    "evaluate", "exact_stats", "find_components", "hull", "inverse_gauss", "laurent_oracle",
    "log_gauss", "membership", "occupations", "order", "partial", "partition_function", "render2d",
    "series_power", "solve_mean_energy", "theorem3_compare", "theta", "vertex_components",
]
