"""Exact Newton polyhedra: hulls, dual cones, interior tests, lattice generation.

All arithmetic is over ``Fraction``/``int``. Exact hulls are provided up to
affine dimension 3; ``contains_interior_lp`` covers higher dimensions.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError

Vec = tuple  # tuple[Fraction, ...]


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, float):
        return Fraction(v)
    return Fraction(v)


def as_vector(p) -> Vec:
    if isinstance(p, (int, float, Fraction, str)):
        p = (p,)
    return tuple(as_fraction(v) for v in p)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _primitive(v) -> tuple:
    """Scale a rational vector to the primitive integer vector with the same direction."""
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator) if isinstance(x, Fraction) else den
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def _echelon(rows: list[list[Fraction]], ncols: int):
    """Reduced row echelon form. Returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / Fraction(m[r][c])
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: list[Sequence], ncols: int) -> list[Vec]:
    """Rational basis of ``{x : row . x = 0 for all rows}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, piv = _echelon([[as_fraction(x) for x in r] for r in rows], ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone ``{s : <s, a> <= 0 for a in inequalities}``.

    ``generators`` are the extreme rays (outward facet normals when the cone is
    a dual cone), ``lineality`` spans the lines it contains.
    """

    generators: tuple
    lineality: tuple = ()
    inequalities: tuple = ()

    def contains(self, s) -> bool:
        s = as_vector(s)
        return all(_dot(a, s) <= 0 for a in self.inequalities)

    def contains_interior(self, s) -> bool:
        s = as_vector(s)
        return all(_dot(a, s) < 0 for a in self.inequalities)

    def interior_direction(self) -> Vec:
        """Sum of the primitive generators; lies in the interior of a full-dimensional cone."""
        n = len(self.generators[0]) if self.generators else len(self.lineality[0]) if self.lineality else 0
        out = [Fraction(0)] * n
        for g in self.generators:
            for j, x in enumerate(_primitive(g)):
                out[j] += x
        return tuple(out)


@dataclass(frozen=True)
class Polyhedron:
    """``conv(vertices) + cone(recession)``, with its H-representation.

    ``facets`` are pairs ``(a, b)`` meaning ``<a, x> <= b``; ``equations``
    pairs mean ``<a, x> = b`` and are present when the polyhedron is not
    full-dimensional.
    """

    n: int
    vertices: tuple
    recession: tuple = ()
    facets: tuple = ()
    equations: tuple = ()

    @property
    def dim(self) -> int:
        return self.n - len(self.equations)

    def contains(self, u) -> bool:
        u = as_vector(u)
        return all(_dot(a, u) == b for a, b in self.equations) and all(
            _dot(a, u) <= b for a, b in self.facets
        )

    def to_json(self) -> dict:
        def enc(v):
            return [[x.numerator, x.denominator] for x in v]

        return {
            "n": self.n,
            "vertices": [enc(v) for v in self.vertices],
            "recession": [enc(r) for r in self.recession],
        }

    @classmethod
    def from_json(cls, data) -> "Polyhedron":
        if isinstance(data, str):
            data = json.loads(data)

        def dec(v):
            return tuple(Fraction(int(p), int(q)) for p, q in v)

        try:
            return hull([dec(v) for v in data["vertices"]], [dec(r) for r in data.get("recession", [])])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed polyhedron JSON: {exc}") from exc


def _facets_full(points: list[tuple], rays: list[tuple], d: int) -> list[tuple]:
    """Facet inequalities of a full-dimensional polyhedron in Z^d by enumeration.

    Candidate hyperplanes pass through one point and are spanned by ``d-1``
    independent directions taken from point differences and rays.
    """
    if d == 0:
        return []
    found = {}
    for i, p0 in enumerate(points):
        dirs = [_sub(p, p0) for p in points[i + 1 :]] + [tuple(r) for r in rays]
        for combo in itertools.combinations(dirs, d - 1):
            ns = nullspace(list(combo), d)
            if len(ns) != 1:
                continue
            a = _primitive(ns[0])
            b = _dot(a, p0)
            vals = [_dot(a, p) - b for p in points]
            rv = [_dot(a, r) for r in rays]
            if all(v <= 0 for v in vals) and all(v <= 0 for v in rv):
                found[a] = b
            elif all(v >= 0 for v in vals) and all(v >= 0 for v in rv):
                a = tuple(-x for x in a)
                found[a] = -b
    return sorted(found.items())


def _rank(vectors: list[Sequence], ncols: int) -> int:
    if not vectors:
        return 0
    return len(_echelon([[as_fraction(x) for x in v] for v in vectors], ncols)[1])


def hull(points: Iterable, recession: Iterable = ()) -> Polyhedron:
    """Exact convex hull of ``points`` plus the cone spanned by ``recession``."""
    pts = []
    for p in points:
        v = as_vector(p)
        if v not in pts:
            pts.append(v)
    if not pts:
        raise InputError("hull of an empty set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise InputError("points of mixed dimension")
    rays = []
    for r in recession:
        v = as_vector(r)
        if len(v) != n:
            raise InputError("ray dimension mismatch")
        if any(v):
            prim = tuple(Fraction(x) for x in _primitive(v))
            if prim not in rays:
                rays.append(prim)

    p0 = pts[0]
    dirs = [_sub(p, p0) for p in pts[1:]] + rays
    red, piv = _echelon([list(v) for v in dirs], n) if dirs else ([], [])
    d = len(piv)
    eq_normals = nullspace([list(r) for r in red], n) if red else nullspace([], n)
    equations = tuple((_primitive(a), _dot(_primitive(a), p0)) for a in eq_normals) if d < n else ()
    if d > 3:
        raise InputError("exact hulls are limited to affine dimension <= 3")

    # work in the pivot coordinates, scaled to integers
    den = 1
    for v in pts + rays:
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)

    def proj(v):
        return tuple(int(v[c] * den) for c in piv)

    ipts = [proj(p) for p in pts]
    irays = [proj(r) for r in rays]
    facets_d = _facets_full(ipts, irays, d)

    def lift(a):
        full = [0] * n
        for c, x in zip(piv, a):
            full[c] = x
        return tuple(full)

    facets = tuple((tuple(Fraction(x) for x in lift(a)), Fraction(b, den)) for a, b in facets_d)

    verts = []
    for p, ip in zip(pts, ipts):
        tight = [a for a, b in facets_d if _dot(a, ip) == b]
        if _rank(tight, d) == d:
            verts.append(p)
    if not verts:
        raise InputError("polyhedron contains a line (support not in an acute cone)")
    ext_rays = []
    for r, ir in zip(rays, irays):
        tight = [a for a, b in facets_d if _dot(a, ir) == 0]
        if _rank(tight, d) == d - 1:
            ext_rays.append(r)
    equations = tuple((tuple(Fraction(x) for x in a), Fraction(b)) for a, b in equations)
    return Polyhedron(n, tuple(sorted(verts)), tuple(sorted(ext_rays)), facets, equations)


def dual_cone_at(P: Polyhedron, nu) -> Cone:
    """Cone of ``s`` for which ``<s, .>`` attains its maximum over ``P`` at vertex ``nu``."""
    nu = as_vector(nu)
    if nu not in P.vertices:
        raise InputError(f"{tuple(str(x) for x in nu)} is not a vertex")
    gens = tuple(
        tuple(Fraction(x) for x in _primitive(a)) for a, b in P.facets if _dot(a, nu) == b
    )
    lineality = tuple(a for a, _ in P.equations)
    ineq = [_sub(v, nu) for v in P.vertices if v != nu] + list(P.recession)
    return Cone(gens, lineality, tuple(ineq))


def contains_interior(P: Polyhedron, u) -> bool:
    """True iff ``u`` lies strictly inside ``P`` (which must be full-dimensional)."""
    u = as_vector(u)
    if len(u) != P.n:
        raise InputError("dimension mismatch")
    if P.equations:
        return False
    return all(_dot(a, u) < b for a, b in P.facets)


def contains_interior_lp(points: Sequence, u, recession: Sequence = ()) -> bool:
    """Floating-point interior test for any dimension via a linear program.

    ``u`` is interior iff it is a combination of the points (weights summing
    to one) and rays with every weight strictly positive, and the points
    affinely span the space.
    """
    import numpy as np
    from scipy.optimize import linprog

    pts = np.array([[float(x) for x in as_vector(p)] for p in points])
    n = pts.shape[1]
    rays = np.array([[float(x) for x in as_vector(r)] for r in recession]).reshape(-1, n)
    if np.linalg.matrix_rank(np.vstack([pts[1:] - pts[0], rays])) < n:
        return False
    m, k = len(pts), len(rays)
    # variables: lambda (m), mu (k), t ; maximise t
    A_eq = np.zeros((n + 1, m + k + 1))
    A_eq[:n, :m] = pts.T
    A_eq[:n, m : m + k] = rays.T
    A_eq[n, :m] = 1
    b_eq = np.concatenate([[float(x) for x in as_vector(u)], [1.0]])
    A_ub = np.zeros((m + k, m + k + 1))
    A_ub[:, : m + k] = -np.eye(m + k)
    A_ub[:, -1] = 1
    c = np.zeros(m + k + 1)
    c[-1] = -1
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m + k), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * (m + k) + [(None, 1)], method="highs")
    return bool(res.status == 0 and -res.fun > 1e-12)


def generates_lattice(points: Sequence[Sequence[int]]) -> bool:
    """Whether the differences ``s - s0`` generate ``Z^n`` as a group."""
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        return False
    n = len(pts[0])
    rows = [list(_sub(p, pts[0])) for p in pts[1:]]
    rows = [r for r in rows if any(r)]
    # integer row reduction (Hermite-style); the lattice index is the product of pivots
    pivots = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col] != 0]
        zero = [r for r in rows if r[col] == 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (rest if r[col] != 0 else zero).append(r)
            nz = [piv] + rest
        pivots.append(abs(nz[0][col]))
        rows = [r for r in zero if any(r)]
        col += 1
    return len(pivots) == n and all(p == 1 for p in pivots)


def diameter(points: Sequence) -> float:
    pts = [[float(x) for x in as_vector(p)] for p in points]
    best = 0.0
    for a, b in itertools.combinations(pts, 2):
        best = max(best, math.dist(a, b))
    return best
