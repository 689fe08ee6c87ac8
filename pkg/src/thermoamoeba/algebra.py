"""Laurent polynomials, fiber restriction and simultaneous root iteration."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Number
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateFiberError, DomainError, InputError, NumericalError

Exponent = tuple  # tuple[int, ...]


def _is_zero(c) -> bool:
    return c == 0


@dataclass(frozen=True)
class LaurentPolynomial:
    """Finite sum ``sum a_alpha z**alpha`` over integer exponent vectors.

    Coefficients keep their Python type (int, Fraction, float, complex) so
    that integer inputs stay usable by the exact oracles.
    """

    n: int
    terms: Mapping[Exponent, Number] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise InputError("dimension must be >= 1")
        clean = {}
        for exp, c in dict(self.terms).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.n:
                raise InputError(f"exponent {exp} does not have length {self.n}")
            if isinstance(c, complex) and c.imag == 0:
                c = c.real
            if isinstance(c, float) and c.is_integer():
                c = int(c)
            if _is_zero(c):
                continue
            clean[exp] = clean.get(exp, 0) + c
            if _is_zero(clean[exp]):
                del clean[exp]
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(clean.items()))))

    # construction helpers

    @classmethod
    def constant(cls, n: int, c=1) -> "LaurentPolynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "LaurentPolynomial":
        return cls(len(exp), {tuple(exp): c})

    @classmethod
    def variable(cls, n: int, j: int) -> "LaurentPolynomial":
        e = [0] * n
        e[j] = 1
        return cls(n, {tuple(e): 1})

    # arithmetic

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            if other.n != self.n:
                raise InputError("dimension mismatch")
            return other
        return LaurentPolynomial.constant(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPolynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("only nonnegative powers are supported")
        result = LaurentPolynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.n == other.n and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.n, tuple(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(
                f"z{j + 1}" if k == 1 else f"z{j + 1}^{k}" for j, k in enumerate(e) if k
            )
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    # queries

    @property
    def support(self) -> list[Exponent]:
        return list(self.terms)

    def coefficient(self, exp: Sequence[int]):
        return self.terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self.terms

    @cached_property
    def _arrays(self):
        if not self.terms:
            return np.zeros((0, self.n), dtype=np.int64), np.zeros(0, dtype=complex)
        exps = np.array(list(self.terms), dtype=np.int64).reshape(-1, self.n)
        coefs = np.array([complex(c) for c in self.terms.values()], dtype=complex)
        return exps, coefs

    def __call__(self, z):
        return evaluate(self, z)

    # serialization

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"exp": list(e), "re": float(complex(c).real), "im": float(complex(c).imag)}
                for e, c in self.terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data) -> "LaurentPolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = int(data["n"])
            terms = {}
            for t in data["terms"]:
                re = t.get("re", 0.0)
                im = t.get("im", 0.0)
                c = complex(re, im) if im else re
                e = tuple(int(v) for v in t["exp"])
                terms[e] = terms.get(e, 0) + c
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed polynomial JSON: {exc}") from exc
        return cls(n, terms)


def evaluate(p: LaurentPolynomial, z) -> complex | np.ndarray:
    """Evaluate ``p`` at ``z`` (shape ``(n,)`` or ``(..., n)``)."""
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != p.n:
        raise InputError(f"point has {z.shape[-1]} coordinates, expected {p.n}")
    exps, coefs = p._arrays
    if coefs.size == 0:
        out = np.zeros(z.shape[:-1], dtype=complex)
        return complex(out) if out.ndim == 0 else out
    neg = (exps < 0).any(axis=0)
    if np.any((z == 0) & neg):
        raise DomainError("zero coordinate raised to a negative power")
    # log-free monomial evaluation keeps exactness for integer powers
    mono = np.ones(z.shape[:-1] + (len(coefs),), dtype=complex)
    for j in range(p.n):
        col = exps[:, j]
        if np.any(col):
            mono = mono * z[..., j, None] ** col
    out = mono @ coefs
    return complex(out) if np.ndim(out) == 0 else out


def partial(p: LaurentPolynomial, j: int) -> LaurentPolynomial:
    """Derivative with respect to ``z_j`` (0-based axis)."""
    if not 0 <= j < p.n:
        raise InputError(f"axis {j} out of range for n={p.n}")
    out = {}
    for e, c in p.terms.items():
        if e[j]:
            ne = list(e)
            ne[j] -= 1
            out[tuple(ne)] = e[j] * c
    return LaurentPolynomial(p.n, out)


def theta(p: LaurentPolynomial, j: int) -> LaurentPolynomial:
    """Logarithmic derivative operator ``z_j d/dz_j``."""
    if not 0 <= j < p.n:
        raise InputError(f"axis {j} out of range for n={p.n}")
    return LaurentPolynomial(p.n, {e: e[j] * c for e, c in p.terms.items()})


def exact_coefficients(p: LaurentPolynomial) -> dict | None:
    """Coefficients as int/Fraction, or None when some coefficient is not real rational."""
    out = {}
    for e, c in p.terms.items():
        if isinstance(c, complex):
            if c.imag != 0:
                return None
            c = c.real
        if isinstance(c, (int, Fraction)):
            out[e] = c
        elif isinstance(c, float):
            if not math.isfinite(c):
                return None
            f = Fraction(c)
            out[e] = int(f) if f.denominator == 1 else f
        else:
            try:
                out[e] = Fraction(c)
            except (TypeError, ValueError):
                return None
    return out


# univariate polynomials and roots


@dataclass(frozen=True)
class UnivariatePolynomial:
    """Complex polynomial, coefficients in ascending degree."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1] * 0
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1 if np.any(self.coefficients) else -1

    def __call__(self, z):
        return np.polyval(self.coefficients[::-1], z)

    def roots(self, tol: float = 1e-10) -> np.ndarray:
        return roots(self, tol)

    def __eq__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            return NotImplemented
        return np.array_equal(self.coefficients, other.coefficients)

    __hash__ = None


@dataclass(frozen=True)
class Fiber:
    """Restriction of a Laurent polynomial to one coordinate line.

    ``poly`` equals ``z_j**shift * p`` as a polynomial in ``z_j``; ``shift``
    is minus the smallest exponent of ``z_j`` in ``p``. Zeros of ``p`` on the
    line inside ``|z_j| < R`` number ``#(roots of poly in the disk) - shift``.
    """

    poly: UnivariatePolynomial
    shift: int
    axis: int

    @property
    def zero_roots(self) -> int:
        c = self.poly.coefficients
        nz = np.flatnonzero(c)
        return int(nz[0]) if nz.size else 0


def fiber_coefficients(p: LaurentPolynomial, j: int, w) -> tuple[np.ndarray, int]:
    """Coefficients of the ``z_j`` fibers for a batch ``w`` of shape ``(B, n-1)``.

    Returns an array ``(B, D+1)`` in ascending powers and the shift.
    """
    exps, coefs = p._arrays
    w = np.asarray(w, dtype=complex)
    if w.ndim == 1:
        w = w[None, :]
    if w.shape[1] != p.n - 1:
        raise InputError(f"fiber needs {p.n - 1} fixed coordinates")
    if coefs.size == 0:
        return np.zeros((w.shape[0], 1), dtype=complex), 0
    lo = int(exps[:, j].min())
    hi = int(exps[:, j].max())
    others = [i for i in range(p.n) if i != j]
    vals = np.ones((w.shape[0], len(coefs)), dtype=complex) * coefs
    for k, i in enumerate(others):
        col = exps[:, i]
        if np.any(col):
            if np.any((w[:, k] == 0)[:, None] & (col < 0)[None, :]):
                raise DomainError("zero coordinate raised to a negative power")
            vals = vals * w[:, k, None] ** col
    out = np.zeros((w.shape[0], hi - lo + 1), dtype=complex)
    idx = exps[:, j] - lo
    for t in range(len(coefs)):
        out[:, idx[t]] += vals[:, t]
    return out, -lo


def fiber(p: LaurentPolynomial, j: int, w: Sequence[complex]) -> Fiber:
    """Univariate polynomial in ``z_j`` after fixing the other coordinates to ``w``."""
    if not 0 <= j < p.n:
        raise InputError(f"axis {j} out of range for n={p.n}")
    c, shift = fiber_coefficients(p, j, np.asarray(w, dtype=complex).reshape(1, -1))
    poly = UnivariatePolynomial(c[0])
    if poly.degree < 0:
        raise DegenerateFiberError("fiber polynomial vanishes identically")
    return Fiber(poly, shift, j)


def coefficient_bound(c: np.ndarray) -> np.ndarray:
    """Upper bound on root moduli for rows of ascending coefficients (monic-normalised).

    Minimum of the Cauchy bound ``1 + max|c_i/c_d|`` and the Fujiwara bound.
    """
    d = c.shape[-1] - 1
    a = np.abs(c[..., :-1] / c[..., -1:])
    cauchy = 1.0 + a.max(axis=-1)
    powers = 1.0 / (d - np.arange(d))
    fuj = a ** powers
    fuj[..., 0] = (a[..., 0] / 2.0) ** powers[0]
    fujiwara = 2.0 * fuj.max(axis=-1)
    r = np.minimum(cauchy, fujiwara)
    return np.where(r > 0, r, 1.0)


def _horner(c: np.ndarray, z: np.ndarray):
    """Values and derivatives of rows ``c`` (B, d+1) at points ``z`` (B, m)."""
    p = np.broadcast_to(c[:, -1:], z.shape).astype(complex)
    dp = np.zeros_like(p)
    for k in range(c.shape[1] - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, k : k + 1]
    return p, dp


def aberth_batch(c: np.ndarray, maxiter: int = 200, tol: float = 1e-10):
    """Aberth-Ehrlich iteration on rows of ascending coefficients of equal degree.

    Leading coefficients must be nonzero. Returns ``(roots, converged, residual)``
    where ``residual[b]`` is the largest scaled residual of row ``b``.
    """
    c = np.asarray(c, dtype=complex)
    c = c / c[:, -1:]
    B, d = c.shape[0], c.shape[1] - 1
    if d == 0:
        return np.zeros((B, 0), dtype=complex), np.ones(B, bool), np.zeros(B)
    if d == 1:
        z = -c[:, :1].copy()
        return z, np.ones(B, bool), np.zeros(B)
    r = coefficient_bound(c)
    angles = 2 * np.pi * np.arange(d) / d + 0.4
    z = r[:, None] * np.exp(1j * angles)[None, :]
    active = np.ones(B, dtype=bool)
    eye = np.eye(d, dtype=bool)
    eps = np.finfo(float).eps
    for _ in range(maxiter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        za = z[idx]
        p, dp = _horner(c[idx], za)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = za[:, :, None] - za[:, None, :]
            diff[:, eye] = np.inf
            s = (1.0 / diff).sum(axis=2)
            step = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(step)
        step[bad] = 0.0
        znew = za - step
        small = np.abs(step) <= 8 * eps * np.maximum(np.abs(znew), 1e-300)
        exact = p == 0
        done = np.all(small | exact, axis=1) & ~bad.any(axis=1)
        z[idx] = znew
        active[idx[done]] = False
    scale = _horner(np.abs(c), np.abs(z))[0].real
    val = np.abs(_horner(c, z)[0])
    with np.errstate(divide="ignore", invalid="ignore"):
        resid = np.where(scale > 0, val / scale, val)
    resid_row = resid.max(axis=1)
    converged = (~active & np.isfinite(resid_row)) | (resid_row <= tol)
    return z, converged, resid_row


def roots(p: UnivariatePolynomial, tol: float = 1e-10, maxiter: int = 200) -> np.ndarray:
    """All complex roots of ``p`` (with multiplicity).

    Zero roots coming from vanishing low coefficients are returned exactly as 0.
    """
    if not isinstance(p, UnivariatePolynomial):
        p = UnivariatePolynomial(p)
    if p.degree < 1:
        raise InputError("root extraction needs degree >= 1")
    c = p.coefficients
    nz = np.flatnonzero(c)
    zeros = int(nz[0])
    core = c[zeros:]
    if len(core) == 1:
        return np.zeros(zeros, dtype=complex)
    z, ok, resid = aberth_batch(core[None, :], maxiter=maxiter, tol=tol)
    if not ok[0]:
        raise NumericalError(
            f"root iteration did not converge (residual {resid[0]:.3e})", residual=float(resid[0])
        )
    out = np.concatenate([np.zeros(zeros, dtype=complex), z[0]])
    return out[np.lexsort((out.imag, out.real))]


def batch_roots(c: np.ndarray, tol: float = 1e-10):
    """Roots of many ascending coefficient rows of common length.

    Rows whose leading coefficients vanish are reduced individually. Returns
    ``(roots, ok)`` with roots padded by NaN to the common maximal degree.
    """
    c = np.asarray(c, dtype=complex)
    B, D = c.shape[0], c.shape[1] - 1
    out = np.full((B, max(D, 0)), np.nan + 0j)
    ok = np.ones(B, dtype=bool)
    if D <= 0:
        ok[:] = np.any(c != 0, axis=1)
        return out, ok
    mag = np.abs(c).max(axis=1)
    regular = np.abs(c[:, -1]) > 1e-13 * mag
    idx = np.flatnonzero(regular)
    if idx.size:
        z, conv, _ = aberth_batch(c[idx], tol=tol)
        out[idx] = z
        ok[idx] = conv
    for b in np.flatnonzero(~regular):
        row = c[b].copy()
        row[np.abs(row) <= 1e-13 * mag[b]] = 0
        poly = UnivariatePolynomial(row)
        if poly.degree < 0:
            ok[b] = False
            continue
        if poly.degree == 0:
            continue
        try:
            r = roots(poly, tol)
        except NumericalError:
            ok[b] = False
            continue
        out[b, : len(r)] = r
    return out, ok


def parse_exponent_list(items: Iterable[Iterable[int]]) -> list[Exponent]:
    return [tuple(int(v) for v in e) for e in items]
