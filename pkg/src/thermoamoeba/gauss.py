"""Logarithmic Gauss map, its inverse, and amoeba contours."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .algebra import LaurentPolynomial, evaluate, theta
from .errors import InputError, NoConvergenceError, SingularPointError


class DegenerateCriticalPointWarning(RuntimeWarning):
    """The Gauss map is not locally invertible at a computed preimage."""


@dataclass(frozen=True)
class ProjectiveDirection:
    """Homogeneous coordinates scaled so the first largest-modulus entry equals 1."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex).ravel()
        if not np.any(c):
            raise InputError("projective direction with all coordinates zero")
        k = int(np.argmax(np.abs(c) >= np.abs(c).max() * (1 - 1e-12)))
        object.__setattr__(self, "coords", c / c[k])

    def is_real(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(self.coords.imag) <= tol))

    def angle(self) -> float:
        """Angle in ``[0, pi)`` of a real direction in the plane."""
        c = self.coords.real
        a = float(np.arctan2(c[1], c[0]))
        return a % np.pi


def projective_distance(a, b) -> float:
    """Largest 2x2 minor of the normalised pair; zero iff ``a`` and ``b`` are proportional."""
    a = np.asarray(getattr(a, "coords", a), dtype=complex)
    b = np.asarray(getattr(b, "coords", b), dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    m = np.abs(np.outer(a, b) - np.outer(b, a))
    return float(m.max())


def _thetas(Q):
    return [theta(Q, j) for j in range(Q.n)]


def log_gauss(Q: LaurentPolynomial, z, tol: float = 1e-12) -> ProjectiveDirection:
    """``(z_1 dQ/dz_1 : ... : z_n dQ/dz_n)`` at a point of the hypersurface."""
    z = np.asarray(z, dtype=complex)
    g = np.array([evaluate(t, z) for t in _thetas(Q)])
    scale = _scale(Q, z)
    if np.abs(g).max() <= tol * scale:
        raise SingularPointError("all logarithmic derivatives vanish", residual=float(np.abs(g).max()))
    return ProjectiveDirection(g)


def _scale(Q, z):
    exps, coefs = Q._arrays
    mono = np.prod(np.abs(z)[None, :] ** exps, axis=1)
    return float(np.sum(np.abs(coefs) * mono)) or 1.0


def _newton(F, J, xi0, scale, tol=1e-12, maxiter=60):
    """Damped Newton in logarithmic coordinates; halves the step until the residual drops."""
    xi = np.array(xi0, dtype=complex)
    f = F(xi)
    res = np.linalg.norm(f) / scale(xi)
    trace = [res]
    for _ in range(maxiter):
        if res <= tol:
            return xi, res, trace
        Jm = J(xi)
        try:
            step = np.linalg.solve(Jm, -f)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(Jm, -f, rcond=None)[0]
        lam = 1.0
        while lam > 1e-10:
            cand = xi + lam * step
            with np.errstate(over="ignore", invalid="ignore"):
                fc = F(cand)
                rc = np.linalg.norm(fc) / scale(cand)
            if np.isfinite(rc) and rc < res:
                break
            lam *= 0.5
        else:
            break
        xi, f, res = cand, fc, rc
        trace.append(res)
    if res <= tol:
        return xi, res, trace
    raise NoConvergenceError(f"Newton stalled at residual {res:.3e}", residual=res, trace=trace)


def _pivot(q) -> int:
    q = np.asarray(q)
    return int(np.argmax(np.abs(q)))


def inverse_gauss(Q: LaurentPolynomial, q, seed, tol: float = 1e-12, maxiter: int = 60):
    """Solve ``Q = 0`` together with ``gamma(z)`` proportional to ``q``.

    The proportionality equations are ``q_p z_j Q_j - q_j z_p Q_p = 0`` with
    ``p`` the index of the largest ``|q_p|``. Newton runs in ``xi = log z``.
    """
    q = np.asarray(q, dtype=complex)
    if q.shape != (Q.n,) or not np.any(q):
        raise InputError("direction must be a nonzero vector of length n")
    seed = np.asarray(seed, dtype=complex)
    if np.any(seed == 0):
        raise InputError("seed must lie in the complex torus")
    p = _pivot(q)
    th = _thetas(Q)
    th2 = [[theta(t, k) for k in range(Q.n)] for t in th]
    rows = [j for j in range(Q.n) if j != p]

    def F(xi):
        z = np.exp(xi)
        g = [evaluate(t, z) for t in th]
        return np.array([evaluate(Q, z)] + [q[p] * g[j] - q[j] * g[p] for j in rows])

    def J(xi):
        z = np.exp(xi)
        g = [evaluate(t, z) for t in th]
        h = [[evaluate(th2[a][b], z) for b in range(Q.n)] for a in range(Q.n)]
        out = [g]
        for j in rows:
            out.append([q[p] * h[j][k] - q[j] * h[p][k] for k in range(Q.n)])
        return np.array(out, dtype=complex)

    xi, res, trace = _newton(F, J, np.log(seed), lambda xi: _scale(Q, np.exp(xi)), tol, maxiter)
    z = np.exp(xi)
    if Q.n > 1 and is_degenerate(Q, z):
        warnings.warn("logarithmic Gauss map is not locally invertible here", DegenerateCriticalPointWarning)
    return z


def gauss_jacobian(Q: LaurentPolynomial, z, axis: int | None = None) -> np.ndarray:
    """Jacobian of the affine Gauss map ``(gamma_j / gamma_e)_{j != e}`` in log coordinates of V.

    ``e`` is the eliminated axis (largest ``|z_e Q_e|`` by default); the
    remaining log coordinates parametrise V locally.
    """
    z = np.asarray(z, dtype=complex)
    th = _thetas(Q)
    g = np.array([evaluate(t, z) for t in th])
    e = int(np.argmax(np.abs(g))) if axis is None else axis
    if g[e] == 0:
        raise SingularPointError("eliminated axis has vanishing derivative")
    h = np.array([[evaluate(theta(th[a], b), z) for b in range(Q.n)] for a in range(Q.n)])
    free = [j for j in range(Q.n) if j != e]
    dxe = {k: -g[k] / g[e] for k in free}
    Jm = np.zeros((len(free), len(free)), dtype=complex)
    for r, j in enumerate(free):
        for c, k in enumerate(free):
            dgj = h[j][k] + h[j][e] * dxe[k]
            dge = h[e][k] + h[e][e] * dxe[k]
            Jm[r, c] = (dgj * g[e] - g[j] * dge) / g[e] ** 2
    return Jm


def is_degenerate(Q, z, tol: float = 1e-9) -> bool:
    Jm = gauss_jacobian(Q, z)
    if Jm.size == 0:
        return False
    sv = np.linalg.svd(Jm, compute_uv=False)
    return bool(sv.min() <= tol * max(1.0, sv.max()))


def tangent_residual(Q: LaurentPolynomial, q, z) -> float:
    """Largest derivative of ``<q, log z>`` along an orthonormal tangent basis of log V.

    Vanishes exactly at critical points of the monomial ``z**q`` on V.
    """
    z = np.asarray(z, dtype=complex)
    q = np.asarray(q, dtype=complex)
    g = np.array([evaluate(t, z) for t in _thetas(Q)])
    if Q.n == 1:
        return 0.0
    _, _, vh = np.linalg.svd(g[None, :])
    tangent = vh[1:].conj()
    return float(np.abs(tangent @ q).max() / np.linalg.norm(q))


def graph_inverse_gauss(f: LaurentPolynomial, u, seed, tol: float = 1e-12, maxiter: int = 60):
    """Solve ``z_j f_j / f = u_j`` for all ``j``.

    On the graph ``w = f(z)`` these are the preimages of the direction ``(-u : 1)``.
    """
    u = np.asarray(u, dtype=complex).ravel()
    if u.shape != (f.n,):
        raise InputError("u must have length n")
    seed = np.asarray(seed, dtype=complex).ravel()
    if np.any(seed == 0) or evaluate(f, seed) == 0:
        raise InputError("seed must be in the torus with f(seed) != 0")
    th = _thetas(f)
    th2 = [[theta(t, k) for k in range(f.n)] for t in th]

    def F(xi):
        z = np.exp(xi)
        fz = evaluate(f, z)
        return np.array([evaluate(th[j], z) - u[j] * fz for j in range(f.n)])

    def J(xi):
        z = np.exp(xi)
        g = [evaluate(t, z) for t in th]
        return np.array(
            [[evaluate(th2[j][k], z) - u[j] * g[k] for k in range(f.n)] for j in range(f.n)]
        )

    xi, _, _ = _newton(F, J, np.log(seed), lambda xi: _scale(f, np.exp(xi)), tol, maxiter)
    return np.exp(xi)


@dataclass(frozen=True)
class ContourPoint:
    x: np.ndarray
    z: np.ndarray
    direction: ProjectiveDirection
    branch: int
    angle: float


def default_seeds(n: int) -> list[np.ndarray]:
    """Deterministic torus seeds: moduli ``e^{-1.5, 0, 1.5}`` times four phases per axis."""
    base = [np.exp(t + 1j * a) for t in (-1.5, 0.0, 1.5) for a in (0.3, 1.9, 3.4, 4.9)]
    if n >= 3:
        base = [np.exp(t + 1j * a) for t in (-1.0, 1.0) for a in (0.3, 3.4)]
    import itertools

    return [np.array(s) for s in itertools.product(base, repeat=n)]


def directions_2d(count: int) -> list[np.ndarray]:
    """``count`` real directions ``(cos a, sin a)`` with ``a`` uniform in ``[0, pi)``."""
    a = np.pi * (np.arange(count) + 0.5) / count
    return [np.array([np.cos(t), np.sin(t)]) for t in a]


def _same(z1, z2, tol=1e-7):
    return np.linalg.norm(z1 - z2) <= tol * max(1.0, np.linalg.norm(z1))


def contour(Q: LaurentPolynomial, directions, seeds=None, reseed_every: int = 10,
            tol: float = 1e-10) -> list[ContourPoint]:
    """Contour points for a sweep of real directions.

    Solutions are continued from one direction to the next and keep their
    branch id; fresh seeds are tried on the first direction, every
    ``reseed_every`` directions after it, and whenever a branch is lost.
    """
    seeds = default_seeds(Q.n) if seeds is None else [np.asarray(s, dtype=complex) for s in seeds]
    out: list[ContourPoint] = []
    branches: list[tuple[int, np.ndarray]] = []
    next_id = 0
    for i, q in enumerate(directions):
        q = np.asarray(q, dtype=float)
        found: list[tuple[int, np.ndarray]] = []

        def accept(bid, z):
            nonlocal next_id
            if not np.all(np.isfinite(z)) or np.any(z == 0):
                return
            if any(_same(z, w) for _, w in found):
                return
            try:
                d = log_gauss(Q, z)
            except SingularPointError:
                return
            if projective_distance(d, q) > 1e-7 or abs(evaluate(Q, z)) > 1e-8 * _scale(Q, z):
                return
            if bid is None:
                bid = next_id
                next_id += 1
            found.append((bid, z))

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateCriticalPointWarning)
            for bid, z0 in branches:
                try:
                    accept(bid, inverse_gauss(Q, q, z0, tol=tol))
                except (NoConvergenceError, InputError, np.linalg.LinAlgError):
                    pass
            # reseed on schedule, and whenever continuation dropped a branch
            if i % reseed_every == 0 or len(found) < len(branches) or not found:
                for s in seeds:
                    try:
                        accept(None, inverse_gauss(Q, q, s, tol=tol))
                    except (NoConvergenceError, InputError, np.linalg.LinAlgError):
                        pass
        branches = found
        ang = float(np.arctan2(q[1], q[0]) % np.pi) if Q.n == 2 else float(i)
        for bid, z in found:
            out.append(ContourPoint(np.log(np.abs(z)), z, ProjectiveDirection(q), bid, ang))
    return out
