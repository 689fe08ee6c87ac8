"""Exact truncated power series and Laurent-coefficient oracles.

Everything here runs on Python integers and ``Fraction``; floating point only
enters when a caller passes non-rational coefficients to ``laurent_oracle``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

from .algebra import LaurentPolynomial, exact_coefficients
from .errors import InputError, TruncationError


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series in ``n`` variables kept on the box ``0 <= e_j <= box_j``.

    Products discard exponents outside the box; since all exponents are
    nonnegative, the surviving coefficients are exact.
    """

    n: int
    box: tuple
    coefficients: Mapping[tuple, object]

    def __post_init__(self):
        box = tuple(int(b) for b in self.box)
        if len(box) != self.n or any(b < 0 for b in box):
            raise InputError(f"box {self.box} invalid for n={self.n}")
        object.__setattr__(self, "box", box)
        clean = {}
        for e, c in dict(self.coefficients).items():
            e = tuple(int(v) for v in e)
            if any(v < 0 for v in e):
                raise InputError("truncated series support must be nonnegative")
            if c != 0 and self._inside(e):
                clean[e] = _norm(c)
        object.__setattr__(self, "coefficients", MappingProxyType(clean))

    def _inside(self, e) -> bool:
        return all(0 <= v <= b for v, b in zip(e, self.box))

    @classmethod
    def from_polynomial(cls, p: LaurentPolynomial, box: Sequence[int]) -> "TruncatedSeries":
        coeffs = exact_coefficients(p)
        if coeffs is None:
            raise InputError("exact series need rational coefficients")
        return cls(p.n, tuple(box), coeffs)

    @classmethod
    def one(cls, n: int, box: Sequence[int]) -> "TruncatedSeries":
        return cls(n, tuple(box), {(0,) * n: 1})

    def coeff(self, e: Sequence[int]):
        e = tuple(int(v) for v in e)
        if len(e) != self.n:
            raise InputError("exponent length mismatch")
        if any(v < 0 for v in e):
            return 0
        if not self._inside(e):
            raise TruncationError(f"exponent {e} lies outside the truncation box {self.box}")
        return self.coefficients.get(e, 0)

    def _check(self, other: "TruncatedSeries"):
        if other.n != self.n or other.box != self.box:
            raise InputError("series live on different boxes")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        out = dict(self.coefficients)
        for e, c in other.coefficients.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.n, self.box, out)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        box = self.box
        out: dict = {}
        for e1, c1 in self.coefficients.items():
            for e2, c2 in other.coefficients.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if all(v <= b for v, b in zip(e, box)):
                    out[e] = out.get(e, 0) + c1 * c2
        return TruncatedSeries(self.n, box, out)

    def __pow__(self, N: int) -> "TruncatedSeries":
        return series_power(self, N)

    def divide(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Exact quotient ``self / other``; ``other`` needs a nonzero constant term."""
        self._check(other)
        q0 = other.coefficients.get((0,) * self.n, 0)
        if q0 == 0:
            raise InputError("divisor has zero constant term")
        rest = [(e, c) for e, c in other.coefficients.items() if any(e)]
        out: dict = {}
        # total-degree order guarantees all lower coefficients are known
        grid = sorted(itertools.product(*(range(b + 1) for b in self.box)), key=sum)
        for a in grid:
            acc = self.coefficients.get(a, 0)
            for e, c in rest:
                b = tuple(x - y for x, y in zip(a, e))
                if min(b) >= 0:
                    v = out.get(b)
                    if v:
                        acc -= c * v
            if acc:
                out[a] = Fraction(acc, q0) if isinstance(acc, int) and isinstance(q0, int) else acc / q0
        return TruncatedSeries(self.n, self.box, out)


def series_power(Z: TruncatedSeries, N: int) -> TruncatedSeries:
    """Exact ``Z**N`` within the box, by binary powering."""
    if N < 0:
        raise InputError("power must be nonnegative")
    result = TruncatedSeries.one(Z.n, Z.box)
    base = Z
    while N:
        if N & 1:
            result = result * base
        N >>= 1
        if N:
            base = base * base
    return result


def _grading_vector(Q: LaurentPolynomial, nu: tuple) -> tuple:
    """Integer ``s`` with ``<s, alpha - nu> <= -1`` for every other exponent of ``Q``."""
    from .polytope import dual_cone_at, hull

    P = hull(Q.support)
    cone = dual_cone_at(P, nu)
    s = cone.interior_direction()
    den = 1
    for v in s:
        den = den * Fraction(v).denominator // _gcd(den, Fraction(v).denominator)
    s = tuple(int(Fraction(v) * den) for v in s)
    for a in Q.support:
        if a != nu and sum(x * (y - z) for x, y, z in zip(s, a, nu)) >= 0:
            raise InputError(f"{nu} is not a vertex of the Newton polytope")
    return s


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def laurent_oracle(P: LaurentPolynomial, Q: LaurentPolynomial, nu, alpha, box=None):
    """Coefficient of ``z**alpha`` in the expansion of ``P/Q`` attached to vertex ``nu``.

    Uses ``1/Q = z**-nu / a_nu * sum_k h**k`` with ``h = -(Q - a_nu z**nu)/(a_nu z**nu)``.
    A grading vector from the interior of the dual cone at ``nu`` lowers the
    degree of every factor of ``h``, which bounds the number of terms needed.
    ``box`` (per-coordinate bound on ``|alpha_j|``) is a guard against
    requests the caller did not plan for.
    """
    nu = tuple(int(v) for v in nu)
    alpha = tuple(int(v) for v in alpha)
    n = Q.n
    if P.n != n or len(nu) != n or len(alpha) != n:
        raise InputError("dimension mismatch")
    if box is not None and any(abs(a) > b for a, b in zip(alpha, box)):
        raise TruncationError(f"exponent {alpha} lies outside the box {tuple(box)}")
    a_nu = Q.coefficient(nu)
    if a_nu == 0:
        raise InputError(f"Q has no term at {nu}")
    s = _grading_vector(Q, nu)

    pc, qc = exact_coefficients(P), exact_coefficients(Q)
    if pc is None or qc is None:
        pc, qc = dict(P.terms), dict(Q.terms)
        div = lambda x, y: x / y  # noqa: E731
    else:
        div = lambda x, y: Fraction(x, y) if isinstance(x, int) and isinstance(y, int) else x / y  # noqa: E731
    a_nu = qc[nu]
    h = {
        tuple(x - y for x, y in zip(e, nu)): -div(c, a_nu)
        for e, c in qc.items()
        if e != nu
    }

    # targets: exponent needed from h**k for each term of P
    targets = {}
    for g, pg in pc.items():
        t = tuple(a - x + y for a, x, y in zip(alpha, g, nu))
        targets[t] = targets.get(t, 0) + pg
    dot = lambda e: sum(x * y for x, y in zip(s, e))  # noqa: E731
    floor = min(dot(t) for t in targets)
    if floor > 0:
        return 0
    K = -floor
    # per-axis monotonicity pruning
    upper = [None] * n
    lower = [None] * n
    for j in range(n):
        col = [e[j] for e in h]
        if col and min(col) >= 0:
            upper[j] = max(t[j] for t in targets)
        if col and max(col) <= 0:
            lower[j] = min(t[j] for t in targets)

    def keep(e):
        if dot(e) < floor:
            return False
        for j in range(n):
            if upper[j] is not None and e[j] > upper[j]:
                return False
            if lower[j] is not None and e[j] < lower[j]:
                return False
        return True

    total = 0
    power = {(0,) * n: 1}
    for _ in range(K + 1):
        for t, w in targets.items():
            c = power.get(t)
            if c:
                total += w * c
        nxt: dict = {}
        for e1, c1 in power.items():
            for e2, c2 in h.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if keep(e):
                    nxt[e] = nxt.get(e, 0) + c1 * c2
        power = {e: c for e, c in nxt.items() if c != 0}
        if not power:
            break
    return _norm(div(total, a_nu) if not isinstance(total, complex) else total / a_nu)


def taylor_coefficients(P: LaurentPolynomial, Q: LaurentPolynomial, box) -> TruncatedSeries:
    """Taylor expansion of ``P/Q`` at the origin by series division (exact)."""
    if any(min(e) < 0 for e in P.support + Q.support):
        raise InputError("series division needs polynomials without negative powers")
    return TruncatedSeries.from_polynomial(P, box).divide(TruncatedSeries.from_polynomial(Q, box))
