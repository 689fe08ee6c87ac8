"""Leading-order asymptotics of diagonal Laurent coefficients of P/Q.

For a smooth saddle ``z*`` where ``gamma(z*)`` is proportional to ``q``,

    c_{q k} ~ k^{(1-n)/2} z*^{-q k} C(q),
    C(q) = -sign(q_e) (2 pi)^{(1-n)/2} P(z*) / (z_e Q_e(z*) sqrt(det(-H))),

where ``e`` is the eliminated axis, ``H`` is the Hessian of the phase
``<q, log z>`` restricted to V in the log coordinates of the other axes.
The normalisation is pinned by the central binomial coefficients (see the
test suite): for ``Q = 1 - z1 - z2`` it gives ``C = 1/sqrt(pi)``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import LaurentPolynomial, evaluate, theta
from .errors import DegenerateSaddleError, InputError, NoConvergenceError, NumericalError
from .gauss import DegenerateCriticalPointWarning, inverse_gauss, is_degenerate
from .series import laurent_oracle


@dataclass(frozen=True)
class PhaseHessian:
    matrix: np.ndarray
    det: complex
    axis: int


def _elimination_axis(Q, q, z):
    n = Q.n
    g = np.array([evaluate(theta(Q, j), z) for j in range(n)])
    if g[n - 1] != 0 and q[n - 1] != 0 and abs(g[n - 1]) > 1e-12 * np.abs(g).max():
        return n - 1, g
    e = int(np.argmax(np.abs(g)))
    if g[e] == 0:
        raise InputError("no axis can be eliminated: all z_j Q_j vanish")
    return e, g


def _implicit_phase(Q, q, z, e):
    """Closure ``xi_free -> phase`` with ``z_e`` recovered by Newton from the last value."""
    free = [j for j in range(Q.n) if j != e]
    th_e = theta(Q, e)
    state = {"xe": complex(np.log(z[e]))}
    base_xe = state["xe"]

    def phase(xi_free):
        xi = np.zeros(Q.n, dtype=complex)
        xi[free] = xi_free
        xe = state["xe"]
        for _ in range(60):
            xi[e] = xe
            zz = np.exp(xi)
            f = evaluate(Q, zz)
            d = evaluate(th_e, zz)
            if d == 0:
                raise NumericalError("implicit solve hit a vanishing derivative")
            step = f / d
            xe = xe - step
            if abs(step) <= 1e-15 * max(1.0, abs(xe)):
                break
        else:
            raise NumericalError(f"implicit solve along axis {e} failed")
        state["xe"] = base_xe
        xi[e] = xe
        return complex(np.dot(q, xi))

    return phase, free


def phase_hessian(Q: LaurentPolynomial, q, z, h: float = 1e-4, axis: int | None = None) -> PhaseHessian:
    """Hessian of ``<q, log z>`` on V by central differences with one Richardson step."""
    z = np.asarray(z, dtype=complex)
    q = np.asarray(q, dtype=float)
    if Q.n == 1:
        return PhaseHessian(np.zeros((0, 0)), 1.0 + 0j, 0)
    if axis is None:
        e, _ = _elimination_axis(Q, q, z)
    else:
        e = axis
    phase, free = _implicit_phase(Q, q, z, e)
    x0 = np.log(z[free])
    m = len(free)

    def hess(step):
        H = np.zeros((m, m), dtype=complex)
        f0 = phase(x0)
        for a in range(m):
            ea = np.zeros(m)
            ea[a] = step
            H[a, a] = (phase(x0 + ea) - 2 * f0 + phase(x0 - ea)) / step**2
            for b in range(a + 1, m):
                eb = np.zeros(m)
                eb[b] = step
                H[a, b] = H[b, a] = (
                    phase(x0 + ea + eb) - phase(x0 + ea - eb) - phase(x0 - ea + eb) + phase(x0 - ea - eb)
                ) / (4 * step**2)
        return H

    H = (4 * hess(h / 2) - hess(h)) / 3
    return PhaseHessian(H, complex(np.linalg.det(H)), e)


@dataclass
class AsymptoticEstimate:
    q: tuple
    z_q: np.ndarray
    C_q: complex
    hessian: PhaseHessian
    branch: int = 1
    checks: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.q)

    def log_law(self, k: float) -> complex:
        """Complex logarithm of ``k^{(1-n)/2} z^{-qk} C``."""
        if self.C_q == 0:
            return complex(-math.inf)
        logz = np.log(self.z_q.astype(complex))
        return (1 - self.n) / 2 * math.log(k) - k * complex(np.dot(self.q, logz)) + cmath.log(self.C_q)

    def law(self, k: float) -> complex:
        if self.C_q == 0:
            return 0j
        return cmath.exp(self.log_law(k))


def _positive_seeds(n):
    for t in (0.0, -0.5, -1.0, 0.5, -2.0, 1.0, -3.0, 2.0):
        yield np.full(n, math.exp(t), dtype=complex)
    rng = np.random.default_rng(7)
    for _ in range(16):
        yield np.exp(rng.uniform(-2, 2, n)).astype(complex)


def find_saddle(Q: LaurentPolynomial, q, seed=None):
    """Critical point of ``z**q`` on V; positive real points are preferred."""
    q = np.asarray(q, dtype=float)
    seeds = [np.asarray(seed, dtype=complex)] if seed is not None else list(_positive_seeds(Q.n))
    fallback = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateCriticalPointWarning)
        for s in seeds:
            try:
                z = inverse_gauss(Q, q, s)
            except (NoConvergenceError, InputError, np.linalg.LinAlgError):
                continue
            if seed is not None:
                return z
            if np.all(np.abs(z.imag) <= 1e-10 * np.abs(z)) and np.all(z.real > 0):
                return z.real.astype(complex)
            fallback = z if fallback is None else fallback
    if fallback is not None:
        return fallback
    raise NoConvergenceError("no critical point found for direction %s" % (q,))


def estimate(P: LaurentPolynomial, Q: LaurentPolynomial, q, seed=None, vertex=None,
             check_boundary: bool = True) -> AsymptoticEstimate:
    """Assemble the leading-order law for the diagonal ``c_{q k}``.

    ``vertex`` names the complement component (default: the origin) and is
    used for a local spot check that ``Log z_q`` bounds that component.
    """
    q = tuple(int(v) for v in q)
    if len(q) != Q.n or P.n != Q.n or not any(q):
        raise InputError("direction must be a nonzero integer vector of length n")
    qa = np.array(q, dtype=float)
    z = find_saddle(Q, qa, seed)
    n = Q.n
    checks: dict = {}
    if n > 1 and is_degenerate(Q, z):
        raise DegenerateSaddleError("non-Morse saddle; the leading-order law does not apply")
    H = phase_hessian(Q, qa, z)
    if n > 1 and abs(H.det) <= 1e-10 * max(1.0, float(np.abs(H.matrix).max())) ** (n - 1):
        raise DegenerateSaddleError("non-Morse saddle; the leading-order law does not apply")
    e = H.axis if n > 1 else 0
    ge = evaluate(theta(Q, e), z)
    det_neg = complex(np.linalg.det(-H.matrix)) if n > 1 else 1.0 + 0j
    root = cmath.sqrt(det_neg)
    Pz = evaluate(P, z)
    sign = -math.copysign(1.0, q[e])
    C = sign * (2 * math.pi) ** ((1 - n) / 2) * Pz / (ge * root)
    if abs(Pz) <= 1e-14 * max(1.0, abs(ge)):
        C = 0j
        checks["degenerate"] = "P vanishes at the saddle; higher-order asymptotics not provided"
    if check_boundary and n > 1:
        checks.update(_boundary_checks(Q, qa, z, vertex))
    return AsymptoticEstimate(q, z, complex(C), H, 1, checks)


def _boundary_checks(Q, q, z, vertex):
    from .amoeba import order
    from .errors import OrderError

    y = np.log(np.abs(z))
    nu = tuple(vertex) if vertex is not None else (0,) * Q.n
    step = 1e-2 * q / np.linalg.norm(q)
    out = {}
    try:
        out["order_inside"] = order(Q, y - step, 64)
        out["on_component_boundary"] = out["order_inside"] == nu
    except OrderError:
        out["order_inside"] = None
        out["on_component_boundary"] = False
    return out


def _log_abs_exact(c) -> float:
    from fractions import Fraction

    if isinstance(c, Fraction):
        return math.log(abs(c.numerator)) - math.log(c.denominator)
    if isinstance(c, complex):
        return math.log(abs(c))
    return math.log(abs(c))


def _ratio(exact, est: AsymptoticEstimate, k, branch=1):
    if exact == 0:
        return 0j
    phase = 0.0
    if isinstance(exact, complex):
        phase = cmath.phase(exact)
    elif exact < 0:
        phase = math.pi
    log_exact = complex(_log_abs_exact(exact), phase)
    lr = log_exact - est.log_law(k)
    if branch == -1:
        lr += 1j * math.pi
    return cmath.exp(lr)


def compare(P: LaurentPolynomial, Q: LaurentPolynomial, q, k_list, vertex=None,
            est: AsymptoticEstimate | None = None, seed=None):
    """Rows ``(k, exact c_{qk}, estimate, ratio)``; ratio is None when the estimate vanishes.

    The square-root branch of the Hessian determinant is fixed by the two
    smallest ``k``: if flipping the sign brings both ratios closer to 1, the
    flip is recorded in ``est.branch``.
    """
    q = tuple(int(v) for v in q)
    nu = tuple(vertex) if vertex is not None else (0,) * Q.n
    if est is None:
        est = estimate(P, Q, q, seed=seed, vertex=nu)
    ks = sorted(int(k) for k in k_list)
    exact = {k: laurent_oracle(P, Q, nu, tuple(v * k for v in q)) for k in ks}
    if est.C_q != 0 and len(ks) >= 1:
        probe = ks[:2]
        plus = sum(abs(_ratio(exact[k], est, k) - 1) for k in probe)
        minus = sum(abs(_ratio(exact[k], est, k, -1) - 1) for k in probe)
        if minus < plus:
            est.branch = -1
            est.C_q = -est.C_q
    rows = []
    for k in ks:
        if est.C_q == 0:
            rows.append((k, exact[k], 0j, None))
            continue
        r = _ratio(exact[k], est, k)
        rows.append((k, exact[k], est.law(k), r.real if abs(r.imag) < 1e-12 * abs(r) else r))
    return rows


def loglog_slope(rows) -> float:
    """Least-squares slope of ``log|ratio - 1|`` against ``log k``."""
    ks = np.array([r[0] for r in rows if r[3] is not None], dtype=float)
    err = np.array([abs(r[3] - 1) for r in rows if r[3] is not None], dtype=float)
    return float(np.polyfit(np.log(ks), np.log(err), 1)[0])
