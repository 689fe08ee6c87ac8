"""Darwin-Fowler ensembles over vector spectra.

Exact oracles (series coefficients and brute-force enumeration) sit next
to the convex solver for the mean-energy relations, so every asymptotic
statement can be checked against integers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from .algebra import LaurentPolynomial, evaluate
from .errors import (
    AdmissibilityError,
    BoundaryError,
    EmptyEnsembleError,
    InputError,
    NoConvergenceError,
)
from .polytope import as_fraction, as_vector, contains_interior, contains_interior_lp, generates_lattice, hull
from .series import TruncatedSeries, series_power


@dataclass(frozen=True)
class Spectrum:
    """Energy vectors ``shift + points[k]`` with integer ``points``; ``points[0]`` is zero.

    ``recession`` lists the directions in which a truncated infinite spectrum
    continues; admissibility uses them, the exact oracles do not.
    """

    n: int
    points: tuple
    shift: tuple = ()
    recession: tuple = ()

    def __post_init__(self):
        pts = tuple(tuple(int(v) for v in p) for p in self.points)
        if not pts:
            raise InputError("empty spectrum")
        if any(len(p) != self.n for p in pts):
            raise InputError("spectrum points have the wrong dimension")
        if len(set(pts)) != len(pts):
            raise InputError("spectrum points must be distinct")
        shift = tuple(as_fraction(v) for v in self.shift) if self.shift else (Fraction(0),) * self.n
        rec = tuple(tuple(int(v) for v in r) for r in self.recession)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "recession", rec)

    @classmethod
    def from_energies(cls, energies: Sequence, recession: Sequence = ()) -> "Spectrum":
        """Build from rational energies; the first one becomes the recorded shift."""
        vecs = [as_vector(e) for e in energies]
        if not vecs:
            raise InputError("empty spectrum")
        n = len(vecs[0])
        base = vecs[0]
        pts = []
        for v in vecs:
            d = tuple(a - b for a, b in zip(v, base))
            if any(x.denominator != 1 for x in d):
                raise InputError("spectrum is not a translate of an integer set")
            pts.append(tuple(int(x) for x in d))
        return cls(n, tuple(pts), base, tuple(recession))

    @property
    def energies(self) -> list[tuple]:
        return [tuple(s + p for s, p in zip(self.shift, pt)) for pt in self.points]

    @property
    def generates_lattice(self) -> bool:
        return generates_lattice(self.points)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "shift": [str(s) for s in self.shift],
            "points": [list(p) for p in self.points],
            "recession": [list(r) for r in self.recession],
        }

    @classmethod
    def from_json(cls, data) -> "Spectrum":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = int(data["n"])
            shift = tuple(as_fraction(s) for s in data.get("shift") or [0] * n)
            pts = tuple(tuple(int(v) for v in p) for p in data["points"])
            rec = tuple(tuple(int(v) for v in r) for r in data.get("recession", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed spectrum JSON: {exc}") from exc
        return cls(n, pts, shift, rec)

    def _array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, self.n)


@dataclass
class EnsembleSolution:
    u: tuple
    z: np.ndarray
    mu: np.ndarray
    T: np.ndarray
    S: float
    gradient_norm: float
    iterations: int
    occupations: dict | None = None

    @property
    def infinite_temperature(self) -> list[bool]:
        return [bool(math.isinf(t)) for t in self.T]


@dataclass
class ExactStats:
    N: int
    E: tuple
    total_states: int
    averages: dict = field(default_factory=dict)


def partition_function(S: Spectrum) -> LaurentPolynomial:
    """``sum_k z**points[k]``; the rational shift stays recorded on the spectrum."""
    return LaurentPolynomial(S.n, {p: 1 for p in S.points})


def spectrum_hull(S: Spectrum):
    return hull(S.energies, S.recession)


def admissible(S: Spectrum, u) -> bool:
    """Whether ``u`` lies in the interior of the convex hull of the (untruncated) spectrum."""
    u = as_vector(u)
    if len(u) != S.n:
        raise InputError("u has the wrong dimension")
    if S.n > 3:
        return contains_interior_lp(S.energies, u, S.recession)
    return contains_interior(spectrum_hull(S), u)


def _in_closure(S: Spectrum, u) -> bool:
    if S.n > 3:
        # no exact hull here; outside points then surface as an escape
        return True
    return spectrum_hull(S).contains(as_vector(u))


def _objective(D, x):
    """``log sum exp(<eps_k - u, x>)`` and its softmax weights; centring avoids cancellation."""
    a = D @ x
    lz = logsumexp(a)
    return lz, np.exp(a - lz)


def solve_mean_energy(S: Spectrum, u, x0=None, tol: float = 1e-10, escape: float = 50.0,
                      maxiter: int = 500) -> EnsembleSolution:
    """Minimise ``log Z(e^x) - <u, x>`` by damped Newton; ``z = e^x``.

    The minimum value is the entropy. ``u`` outside the closed hull is
    rejected before iterating; on the boundary the minimiser does not exist
    and the iterates run off, which is reported once ``|x| > escape``.
    """
    u_true = as_vector(u)
    if len(u_true) != S.n:
        raise InputError("u has the wrong dimension")
    if not _in_closure(S, u_true):
        raise AdmissibilityError(f"u = {[str(v) for v in u_true]} lies outside the convex hull of the spectrum")
    E = S._array()
    uu = np.array([float(a - s) for a, s in zip(u_true, S.shift)])
    x = np.zeros(S.n) if x0 is None else np.array(x0, dtype=float)
    D = E - uu
    f, p = _objective(D, x)
    for it in range(1, maxiter + 1):
        g = p @ D
        H = (D * p[:, None]).T @ D - np.outer(g, g)
        w, V = np.linalg.eigh(H)
        w = np.maximum(w, 1e-300)
        step = -V @ ((V.T @ g) / w)
        gnorm = float(np.linalg.norm(g))
        if gnorm <= tol and np.linalg.norm(step) <= 1e-6 * (1 + np.linalg.norm(x)):
            break
        t = 1.0
        while True:
            cand = x + t * step
            fc, pc = _objective(D, cand)
            if fc <= f + 1e-4 * t * (g @ step) or t < 1e-12:
                break
            t *= 0.5
        if fc > f:
            # no further decrease available in floating point
            if gnorm <= tol:
                break
            raise NoConvergenceError(f"line search failed at gradient norm {gnorm:.3e}", residual=gnorm)
        x, f, p = cand, fc, pc
        if np.linalg.norm(x) > escape:
            raise BoundaryError(
                f"iterates escaped (|x| = {np.linalg.norm(x):.1f}): u lies on the boundary of the hull",
                residual=gnorm,
            )
    else:
        raise NoConvergenceError("mean-energy solver hit the iteration limit", residual=gnorm)
    g = p @ D
    with np.errstate(divide="ignore"):
        T = np.where(x == 0, np.inf, -1.0 / np.where(x == 0, 1.0, x))
    return EnsembleSolution(
        u=tuple(u_true), z=np.exp(x), mu=-x, T=T, S=float(f),
        gradient_norm=float(np.linalg.norm(g)), iterations=it,
    )


def occupations(S: Spectrum, sol: EnsembleSolution, N: int) -> dict:
    """Most probable occupation numbers ``a_k = N z^{eps_k} / Z(z)``."""
    E = S._array()
    a = E @ np.log(sol.z)
    p = np.exp(a - logsumexp(a))
    occ = {k: float(N * pk) for k, pk in enumerate(p)}
    sol.occupations = occ
    return occ


def entropy_gradient_check(S: Spectrum, u, h: float = 1e-4) -> float:
    """Max deviation between the finite-difference gradient of the entropy and ``-log z``."""
    u = np.array([float(v) for v in as_vector(u)])
    base = solve_mean_energy(S, [Fraction(v) for v in u])
    dev = 0.0
    for j in range(S.n):
        e = np.zeros(S.n)
        e[j] = h
        sp = solve_mean_energy(S, [Fraction(v) for v in u + e], x0=-base.mu).S
        sm = solve_mean_energy(S, [Fraction(v) for v in u - e], x0=-base.mu).S
        fd = (sp - sm) / (2 * h)
        dev = max(dev, abs(fd - base.mu[j]))
    return dev


def temperature(z) -> np.ndarray:
    """``T_j = -1/log z_j``; ``z_j = 1`` gives infinite temperature."""
    x = np.log(np.asarray(z, dtype=float))
    with np.errstate(divide="ignore"):
        return np.where(x == 0, np.inf, -1.0 / np.where(x == 0, 1.0, x))


# exact oracles


def _integer_energy(S: Spectrum, N: int, E) -> tuple:
    E = as_vector(E)
    if len(E) != S.n:
        raise InputError("E has the wrong dimension")
    d = [e - N * s for e, s in zip(E, S.shift)]
    if any(x.denominator != 1 for x in d):
        raise EmptyEnsembleError("E is not reachable from the spectrum lattice")
    return tuple(int(x) for x in d)


def exact_stats(S: Spectrum, N: int, E) -> ExactStats:
    """Total number of states ``[z^E] Z^N`` and exact averages via ``[z^{E - eps_k}] Z^{N-1}``."""
    if N < 1:
        raise InputError("N must be >= 1")
    Eint = _integer_energy(S, N, E)
    lo = tuple(min(p[j] for p in S.points) for j in range(S.n))
    pts = [tuple(a - b for a, b in zip(p, lo)) for p in S.points]
    target = tuple(e - N * m for e, m in zip(Eint, lo))
    if any(t < 0 for t in target):
        raise EmptyEnsembleError("no admissible collections")
    Z = TruncatedSeries(S.n, target, {p: 1 for p in pts})
    ZN1 = series_power(Z, N - 1)
    ZN = ZN1 * Z
    total = ZN.coeff(target)
    if total == 0:
        raise EmptyEnsembleError("no admissible collections")
    avg = {}
    for k, p in enumerate(pts):
        t = tuple(a - b for a, b in zip(target, p))
        c = 0 if min(t) < 0 else ZN1.coeff(t)
        avg[k] = Fraction(N * c, total)
    return ExactStats(N, tuple(as_vector(E)), int(total), avg)


def enumerate_states(S: Spectrum, N: int, E) -> ExactStats:
    """Brute-force sum of multinomials over all admissible occupation collections."""
    if N < 1:
        raise InputError("N must be >= 1")
    if N > 12:
        raise InputError("enumeration is limited to N <= 12")
    Eint = _integer_energy(S, N, E)
    pts = S.points
    m = len(pts)
    n = S.n
    # bounds of the energy still reachable with r systems drawn from points[k:]
    lo_suffix = [[min(p[j] for p in pts[k:]) for j in range(n)] for k in range(m)]
    hi_suffix = [[max(p[j] for p in pts[k:]) for j in range(n)] for k in range(m)]
    fact = [math.factorial(i) for i in range(N + 1)]
    total = 0
    weighted = [0] * m
    occ = [0] * m

    def rec(k, left, energy):
        nonlocal total
        if k == m - 1:
            last = pts[k]
            if all(energy[j] == left * last[j] for j in range(n)):
                occ[k] = left
                w = fact[N]
                for a in occ:
                    w //= fact[a]
                total += w
                for i, a in enumerate(occ):
                    weighted[i] += a * w
            return
        for a in range(left, -1, -1):
            rest = left - a
            e2 = [energy[j] - a * pts[k][j] for j in range(n)]
            if all(rest * lo_suffix[k + 1][j] <= e2[j] <= rest * hi_suffix[k + 1][j] for j in range(n)):
                occ[k] = a
                rec(k + 1, rest, e2)
        occ[k] = 0

    rec(0, N, list(Eint))
    if total == 0:
        raise EmptyEnsembleError("no admissible collections")
    return ExactStats(N, tuple(as_vector(E)), total, {k: Fraction(weighted[k], total) for k in range(m)})


@dataclass(frozen=True)
class OccupationRow:
    N: int
    k: int
    exact: Fraction
    asymptotic: float
    relative_error: float


def theorem3_compare(S: Spectrum, u, N_list) -> list[OccupationRow]:
    """Exact average occupations against ``N z^{eps_k}/Z`` at ``z = z(u)``."""
    if not S.generates_lattice:
        raise InputError("spectrum does not generate the integer lattice")
    u = as_vector(u)
    sol = solve_mean_energy(S, u)
    rows = []
    for N in N_list:
        E = tuple(N * v for v in u)
        if any(x.denominator != 1 for x in E):
            raise InputError(f"N*u is not integral for N={N}")
        stats = exact_stats(S, N, E)
        occ = occupations(S, sol, N)
        for k, exact in stats.averages.items():
            asym = occ[k]
            rows.append(OccupationRow(N, k, exact, asym, abs(float(exact) - asym) / asym))
    return rows


# rational partition functions in one variable (twin spectra)


def branch_tangent(num: LaurentPolynomial, den: LaurentPolynomial, z: float) -> tuple[float, float]:
    """Slope ``u = z Z'/Z`` and intercept ``log|Z| - u log|z|`` of the graph amoeba contour at real ``z``.

    The slope is read off the logarithmic Gauss map of ``w den(z) - num(z)``.
    """
    from .gauss import log_gauss

    w = evaluate(num, [z]) / evaluate(den, [z])
    graph = _graph_polynomial(num, den)
    d = log_gauss(graph, [z, w]).coords
    u = float((-d[0] / d[1]).real)
    return u, float(math.log(abs(w)) - u * math.log(abs(z)))


def _graph_polynomial(num, den):
    t = {}
    for e, c in den.terms.items():
        t[(e[0], 1)] = t.get((e[0], 1), 0) + c
    for e, c in num.terms.items():
        t[(e[0], 0)] = t.get((e[0], 0), 0) - c
    return LaurentPolynomial(2, t)


def _solve_branch(num, den, u, lo, hi):
    f = lambda z: branch_tangent(num, den, z)[0] - u  # noqa: E731
    return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def common_tangent(num: LaurentPolynomial, den: LaurentPolynomial, branch1, branch2, u_bracket):
    """Slope at which the tangent lines of two real contour branches coincide.

    ``branch1``/``branch2`` are open real ``z`` intervals on which the slope is
    monotone; ``u_bracket`` brackets the sought slope. Returns
    ``(u0, S0, z1, z2)``.
    """
    def gap(u):
        z1 = _solve_branch(num, den, u, *branch1)
        z2 = _solve_branch(num, den, u, *branch2)
        return branch_tangent(num, den, z1)[1] - branch_tangent(num, den, z2)[1]

    u0 = brentq(gap, *u_bracket, xtol=1e-14, maxiter=500)
    z1 = _solve_branch(num, den, u0, *branch1)
    z2 = _solve_branch(num, den, u0, *branch2)
    return u0, branch_tangent(num, den, z1)[1], z1, z2
