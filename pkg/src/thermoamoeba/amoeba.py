"""Numerical amoeba geometry: membership, order vectors, components, 2-D clouds.

Everything is sampling based. A point ``x`` is probed through the tori
``Log^{-1}(x)``: the other coordinates run over a uniform phase grid, the
remaining coordinate is solved from the fiber polynomial, and roots are
compared against the circle ``|z_j| = e^{x_j}``.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .algebra import LaurentPolynomial, batch_roots, evaluate, fiber_coefficients, theta
from .errors import DegenerateFiberError, InputError, OrderError
from .polytope import diameter, dual_cone_at, hull


class Verdict(enum.Enum):
    OUTSIDE = "outside"
    INSIDE = "inside"
    UNCERTAIN = "uncertain"


@dataclass(frozen=True)
class Membership:
    verdict: Verdict
    witness: np.ndarray | None = None
    delta: float = float("nan")
    order: tuple | None = None


@dataclass
class ComplementComponent:
    order: tuple
    representative: np.ndarray
    grid_cells: list = field(default_factory=list)
    bounded: bool = False

    def to_json(self) -> dict:
        return {
            "order": [int(v) for v in self.order],
            "representative": [float(v) for v in self.representative],
            "cells": len(self.grid_cells),
            "bounded": self.bounded,
        }


@dataclass(frozen=True)
class VertexComponent:
    vertex: tuple
    representative: np.ndarray
    verified: bool
    suggested_depth: float | None = None


@dataclass(frozen=True)
class AmoebaPointCloud:
    points: np.ndarray
    skipped: int = 0


def fiber_axis(Q: LaurentPolynomial) -> int:
    """Axis with the largest spread of exponents; ties go to the lowest index."""
    exps, _ = Q._arrays
    spread = exps.max(axis=0) - exps.min(axis=0)
    return int(np.argmax(spread))


def phase_grid(samples: int, k: int) -> np.ndarray:
    """Uniform phases on the ``k``-torus, shape ``(samples**k, k)``."""
    th = 2 * np.pi * np.arange(samples) / samples
    if k == 0:
        return np.zeros((1, 0))
    return np.array(list(itertools.product(th, repeat=k)))


def _fiber_scan(Q, j, X, phases):
    """Per-point root counts and distances for axis ``j``.

    ``X`` has shape ``(M, n)``. Returns ``counts (M, S)``, ``delta (M,)`` and
    an ``ok`` mask ``(M, S)`` for fibers that could be solved.
    """
    n = Q.n
    others = [i for i in range(n) if i != j]
    M, S = X.shape[0], phases.shape[0]
    W = np.exp(X[:, None, others] + 1j * phases[None, :, :]).reshape(M * S, n - 1)
    coeffs, shift = fiber_coefficients(Q, j, W)
    rts, ok = batch_roots(coeffs)
    R = np.exp(np.repeat(X[:, j], S))
    with np.errstate(divide="ignore", invalid="ignore"):
        inside = (np.abs(rts) < R[:, None]).sum(axis=1)
        logdist = np.abs(np.log(np.abs(rts)) - np.repeat(X[:, j], S)[:, None])
    logdist = np.where(np.isfinite(logdist), logdist, np.inf)
    counts = (inside - shift).reshape(M, S)
    ok = ok.reshape(M, S)
    delta = logdist.min(axis=1).reshape(M, S).min(axis=1) if rts.shape[1] else np.full(M, np.inf)
    return counts, delta, ok


def scan_points(Q: LaurentPolynomial, X, phase_samples: int = 64):
    """Order vectors of many points at once.

    Returns ``(orders, consistent)``: ``orders`` is ``(M, n)`` (meaningless
    where ``consistent`` is False).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != Q.n:
        raise InputError("point dimension mismatch")
    phases = phase_grid(phase_samples, Q.n - 1)
    orders = np.zeros(X.shape, dtype=np.int64)
    consistent = np.ones(X.shape[0], dtype=bool)
    for j in range(Q.n):
        counts, _, ok = _fiber_scan(Q, j, X, phases)
        if not ok.any():
            raise DegenerateFiberError(f"no solvable fiber along axis {j}")
        first = counts[:, 0]
        consistent &= ok.all(axis=1) & (counts == first[:, None]).all(axis=1)
        orders[:, j] = first
    return orders, consistent


def order(Q: LaurentPolynomial, x, phase_samples: int = 64) -> tuple:
    """Order vector of the complement component containing ``x``.

    Raises ``OrderError`` when root counts differ between sampled fibers.
    """
    orders, ok = scan_points(Q, np.asarray(x, dtype=float)[None, :], phase_samples)
    if not ok[0]:
        raise OrderError("root counts vary across fibers: point inside or too near the amoeba")
    return tuple(int(v) for v in orders[0])


def _refine_on_torus(Q, x, theta0, steps=8):
    """Gauss-Newton on the phases so that ``Q(exp(x + i theta)) = 0``."""
    th = np.array(theta0, dtype=float)
    grads = [theta(Q, j) for j in range(Q.n)]
    for _ in range(steps):
        z = np.exp(x + 1j * th)
        f = evaluate(Q, z)
        if abs(f) < 1e-15:
            break
        g = np.array([1j * evaluate(gj, z) for gj in grads])
        J = np.vstack([g.real, g.imag])
        step, *_ = np.linalg.lstsq(J, -np.array([f.real, f.imag]), rcond=None)
        th = th + step
    return np.exp(x + 1j * th)


def _crossing_witness(Q, j, x, phases, counts):
    """Bisect between neighbouring phase samples whose counts differ."""
    n = Q.n
    others = [i for i in range(n) if i != j]
    S = len(phases)
    samples = int(round(S ** (1.0 / (n - 1))))
    step = 2 * np.pi / samples
    for s in range(S):
        for k in range(n - 1):
            t = phases[s].copy()
            t[k] = t[k] + step
            # neighbour index in the product grid
            idx = np.round(np.mod(t, 2 * np.pi) / step).astype(int) % samples
            nb = int(np.ravel_multi_index(tuple(idx), (samples,) * (n - 1)))
            if counts[s] == counts[nb]:
                continue
            lo, hi = phases[s].copy(), phases[s].copy()
            hi[k] += step
            c_lo = counts[s]
            for _ in range(50):
                mid = 0.5 * (lo + hi)
                c_mid = _count_at(Q, j, x, others, mid)
                if c_mid == c_lo:
                    lo = mid
                else:
                    hi = mid
            w = np.exp(x[others] + 1j * lo)
            coeffs, _ = fiber_coefficients(Q, j, w[None, :])
            rts, ok = batch_roots(coeffs)
            if not ok[0]:
                continue
            r = rts[0][np.isfinite(rts[0]) & (rts[0] != 0)]
            if r.size == 0:
                continue
            best = r[np.argmin(np.abs(np.log(np.abs(r)) - x[j]))]
            th0 = np.zeros(n)
            th0[others] = lo
            th0[j] = np.angle(best)
            return _refine_on_torus(Q, x, th0)
    return None


def _count_at(Q, j, x, others, ph):
    w = np.exp(x[others] + 1j * ph)
    coeffs, shift = fiber_coefficients(Q, j, w[None, :])
    rts, _ = batch_roots(coeffs)
    with np.errstate(invalid="ignore"):
        return int((np.abs(rts[0]) < np.exp(x[j])).sum()) - shift


def membership(Q: LaurentPolynomial, x, phase_samples: int = 64, tol: float = 1e-8) -> Membership:
    """Classify ``x`` as outside, inside (with a witness on V) or uncertain."""
    if phase_samples < 8:
        raise InputError("phase_samples must be >= 8")
    if Q.is_zero():
        raise InputError("Q vanishes identically")
    x = np.asarray(x, dtype=float)
    n = Q.n
    j = fiber_axis(Q)
    others = [i for i in range(n) if i != j]
    phases = phase_grid(phase_samples, n - 1)
    counts, delta, ok = _fiber_scan(Q, j, x[None, :], phases)
    if not ok.any():
        raise DegenerateFiberError("every sampled fiber is degenerate")
    delta = float(delta[0])
    counts = counts[0]

    def verified(w):
        return (
            w is not None
            and abs(evaluate(Q, w)) <= tol
            and np.max(np.abs(np.log(np.abs(w)) - x)) <= tol
        )

    if delta <= tol:
        # nearest sampled root, then polish the phases
        s = _closest_sample(Q, j, x, others, phases)
        w = _refine_on_torus(Q, x, s)
        return Membership(Verdict.INSIDE if verified(w) else Verdict.UNCERTAIN, w, delta)
    if n > 1 and not (counts == counts[0]).all():
        w = _crossing_witness(Q, j, x, phases, counts)
        if verified(w):
            return Membership(Verdict.INSIDE, w, delta)
        return Membership(Verdict.UNCERTAIN, None, delta)
    try:
        nu = order(Q, x, phase_samples)
    except OrderError:
        return Membership(Verdict.UNCERTAIN, None, delta)
    return Membership(Verdict.OUTSIDE, None, delta, nu)


def _closest_sample(Q, j, x, others, phases):
    W = np.exp(x[others][None, :] + 1j * phases)
    coeffs, _ = fiber_coefficients(Q, j, W)
    rts, _ = batch_roots(coeffs)
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.abs(np.log(np.abs(rts)) - x[j])
    d = np.where(np.isfinite(d), d, np.inf)
    s, r = np.unravel_index(np.argmin(d), d.shape)
    th = np.zeros(Q.n)
    th[others] = phases[s]
    th[j] = np.angle(rts[s, r])
    return th


def vertex_components(Q: LaurentPolynomial, depth: float | None = None, phase_samples: int = 64):
    """Probe deep inside each vertex dual cone and check the order equals the vertex."""
    P = hull(Q.support)
    if depth is None:
        depth = 5.0 + diameter(P.vertices)
    out = []
    for v in P.vertices:
        cone = dual_cone_at(P, v)
        s = np.array([float(c) for c in cone.interior_direction()])
        if not s.any():
            s = np.zeros(Q.n)
        else:
            s = s / np.linalg.norm(s)
        x = depth * s
        vertex = tuple(int(c) for c in v)
        try:
            ok = order(Q, x, phase_samples) == vertex
        except OrderError:
            ok = False
        out.append(VertexComponent(vertex, x, ok, None if ok else 2 * depth))
    return out


def _grid_points(axes):
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1), tuple(len(a) for a in axes)


def _chunked(fn, X, workers):
    if workers is None or workers <= 1 or len(X) < 2 * workers:
        return fn(X)
    chunks = np.array_split(X, workers)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(fn, chunks))
    return tuple(np.concatenate(p) for p in zip(*parts))


def grid_orders(Q: LaurentPolynomial, axes, phase_samples: int = 64, workers: int | None = None):
    """Order vectors on the rectangular grid spanned by ``axes``.

    Returns ``(orders, outside)`` shaped like the grid (orders get a trailing
    axis of length n).
    """
    X, shape = _grid_points(axes)
    orders, ok = _chunked(lambda A: scan_points(Q, A, phase_samples), X, workers)
    return orders.reshape(shape + (Q.n,)), ok.reshape(shape)


def find_components(Q: LaurentPolynomial, axes, phase_samples: int = 64, workers: int | None = None):
    """Flood-fill grid cells that are outside the amoeba into labelled components.

    Cells are joined when they share an order vector and touch (including
    diagonally). Components come back sorted by order vector.
    """
    orders, outside = grid_orders(Q, axes, phase_samples, workers)
    shape = outside.shape
    X, _ = _grid_points(axes)
    X = X.reshape(shape + (Q.n,))
    structure = np.ones((3,) * Q.n, dtype=bool)
    comps = []
    keys = sorted({tuple(int(v) for v in orders[idx]) for idx in zip(*np.nonzero(outside))})
    for key in keys:
        mask = outside & np.all(orders == np.array(key), axis=-1)
        labels, count = ndimage.label(mask, structure=structure)
        for lab in range(1, count + 1):
            cells = np.argwhere(labels == lab)
            pts = X[tuple(cells.T)]
            centre = pts.mean(axis=0)
            rep = pts[np.argmin(np.linalg.norm(pts - centre, axis=1))]
            touches = any(
                (cells[:, d] == 0).any() or (cells[:, d] == shape[d] - 1).any() for d in range(Q.n)
            )
            comps.append(
                ComplementComponent(key, rep, [tuple(int(v) for v in c) for c in cells], not touches)
            )
    return comps


def duplicate_orders(components) -> list[tuple]:
    """Order vectors carried by more than one detected component."""
    seen, dup = set(), []
    for c in components:
        if c.order in seen and c.order not in dup:
            dup.append(c.order)
        seen.add(c.order)
    return dup


def render2d(Q: LaurentPolynomial, x1_range, x1_steps: int = 200, phase_steps: int = 256,
             workers: int | None = None) -> AmoebaPointCloud:
    """Point cloud ``(x1, log|z2|)`` over a grid of ``x1`` and phases of ``z1``."""
    if Q.n != 2:
        raise InputError("render2d needs a polynomial in two variables")
    xs = np.linspace(float(x1_range[0]), float(x1_range[1]), int(x1_steps))
    th = 2 * np.pi * np.arange(phase_steps) / phase_steps
    exps, _ = Q._arrays
    if exps.size == 0 or exps[:, 1].max() == exps[:, 1].min():
        return AmoebaPointCloud(np.zeros((0, 2)), 0)

    def work(xpart):
        W = np.exp(xpart[:, None] + 1j * th[None, :]).reshape(-1, 1)
        coeffs, _ = fiber_coefficients(Q, 1, W)
        degenerate = ~np.any(coeffs != 0, axis=1)
        rts, ok = batch_roots(coeffs)
        x1 = np.repeat(xpart, len(th))
        pts = []
        for r in range(rts.shape[1]):
            col = rts[:, r]
            good = ok & np.isfinite(col) & (col != 0)
            pts.append((np.flatnonzero(good), r, x1[good], np.log(np.abs(col[good]))))
        # restore (x1 index, phase index, root index) order
        rows = np.concatenate([p[0] for p in pts]) if pts else np.zeros(0, int)
        ridx = np.concatenate([np.full(len(p[0]), p[1]) for p in pts]) if pts else np.zeros(0, int)
        a = np.concatenate([p[2] for p in pts]) if pts else np.zeros(0)
        b = np.concatenate([p[3] for p in pts]) if pts else np.zeros(0)
        perm = np.lexsort((ridx, rows))
        return np.stack([a[perm], b[perm]], axis=1), np.array([int((degenerate | ~ok).sum())])

    if workers and workers > 1 and len(xs) >= 2 * workers:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(work, np.array_split(xs, workers)))
    else:
        parts = [work(xs)]
    pts = np.concatenate([p[0] for p in parts])
    skipped = int(sum(int(p[1][0]) for p in parts))
    return AmoebaPointCloud(pts, skipped)
