"""Dense complex polynomials with an explicit ambient degree.

A :class:`Polynomial` stores ``a_0 .. a_n`` lowest degree first, where ``n``
is the *ambient* degree: the space ``C[z]_n`` the polynomial is regarded as
living in.  Trailing zeros are kept, because the reversal ``sharp`` depends
on ``n`` and not on the exact degree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._kernels import aberth_batch
from .errors import (
    AllCoefficientsZero,
    AmbientExceeded,
    BinomOverflow,
    IndexOutOfRange,
    NonConvergence,
)

ZERO_COEFF_RTOL = 1e-14
BINOM_MAX_N = 64
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True, eq=False)
class Polynomial:
    coeffs: np.ndarray
    ambient: int

    def __init__(self, coeffs: Iterable[complex], ambient: int | None = None):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=np.complex128)
        c = np.atleast_1d(c)
        if c.size == 0:
            c = np.zeros(1, dtype=np.complex128)
        if ambient is None:
            ambient = c.size - 1
        ambient = int(ambient)
        if ambient < 0:
            raise ValueError("ambient degree must be nonnegative")
        if c.size > ambient + 1:
            tail = c[ambient + 1 :]
            if np.any(tail != 0):
                raise AmbientExceeded(
                    f"{c.size} coefficients do not fit ambient degree {ambient}"
                )
            c = c[: ambient + 1]
        elif c.size < ambient + 1:
            c = np.concatenate([c, np.zeros(ambient + 1 - c.size, dtype=np.complex128)])
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "ambient", ambient)

    # construction helpers

    @classmethod
    def monomial(cls, k: int, ambient: int | None = None, coeff: complex = 1.0) -> "Polynomial":
        c = np.zeros(k + 1, dtype=np.complex128)
        c[k] = coeff
        return cls(c, k if ambient is None else ambient)

    @classmethod
    def constant(cls, value: complex, ambient: int = 0) -> "Polynomial":
        return cls([value], ambient)

    @classmethod
    def from_roots(cls, roots: Sequence[complex], leading: complex = 1.0) -> "Polynomial":
        c = np.array([leading], dtype=np.complex128)
        for r in roots:
            c = np.convolve(c, np.array([-r, 1.0], dtype=np.complex128))
        return cls(c)

    # basic queries

    @property
    def degree(self) -> int:
        """Exact degree after trimming negligible trailing coefficients; -1 for zero."""
        return exact_degree(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return self.degree < 0

    def is_monic(self, rtol: float = 1e-12) -> bool:
        d = self.degree
        return d >= 0 and abs(self.coeffs[d] - 1.0) <= rtol

    def with_ambient(self, n: int) -> "Polynomial":
        return Polynomial(self.coeffs, n)

    def trimmed(self) -> "Polynomial":
        d = max(self.degree, 0)
        return Polynomial(self.coeffs[: d + 1], d)

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(self.ambient, other.ambient)
        return Polynomial(self.with_ambient(n).coeffs + other.with_ambient(n).coeffs, n)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(self.ambient, other.ambient)
        return Polynomial(self.with_ambient(n).coeffs - other.with_ambient(n).coeffs, n)

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self.coeffs, self.ambient)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return mul(self, other)
        return Polynomial(self.coeffs * complex(other), self.ambient)

    __rmul__ = __mul__

    def allclose(self, other: "Polynomial", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        n = max(self.ambient, other.ambient)
        return bool(
            np.allclose(self.with_ambient(n).coeffs, other.with_ambient(n).coeffs, rtol=rtol, atol=atol)
        )

    def __repr__(self) -> str:
        terms = ", ".join(f"{c:.6g}" for c in self.coeffs)
        return f"Polynomial([{terms}], ambient={self.ambient})"


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    residual: float
    multiplicities: tuple[tuple[complex, int], ...] = field(default=())

    def __len__(self) -> int:
        return int(self.roots.size)

    def __iter__(self):
        return iter(self.roots)


def exact_degree(coeffs: np.ndarray, rtol: float = ZERO_COEFF_RTOL) -> int:
    mags = np.abs(np.asarray(coeffs))
    if mags.size == 0:
        return -1
    top = mags.max()
    if top == 0:
        return -1
    nz = np.flatnonzero(mags > rtol * top)
    return int(nz[-1])


def evaluate(p: Polynomial, z):
    """Horner evaluation; works for scalars and arrays."""
    z_arr = np.asarray(z, dtype=np.complex128)
    out = np.zeros_like(z_arr)
    for c in p.coeffs[::-1]:
        out = out * z_arr + c
    return out[()] if out.ndim == 0 else out


def mul(p: Polynomial, r: Polynomial) -> Polynomial:
    return Polynomial(np.convolve(p.coeffs, r.coeffs), p.ambient + r.ambient)


def compose(f: Polynomial, q: Polynomial) -> Polynomial:
    """Coefficients of f(q(z)) with ambient ``f.ambient * q.ambient``."""
    n, d = f.ambient, q.ambient
    acc = np.array([f.coeffs[n]], dtype=np.complex128)
    for a in f.coeffs[n - 1 :: -1] if n > 0 else ():
        acc = np.convolve(acc, q.coeffs)
        acc[0] += a
    return Polynomial(acc, n * d)


def sharp(p: Polynomial) -> Polynomial:
    """``z^n conj(p(1/conj z))``: conjugate and reverse relative to the ambient degree."""
    return Polynomial(np.conj(p.coeffs[::-1]), p.ambient)


def check(p: Polynomial) -> Polynomial:
    """``p(-z)``."""
    signs = np.where(np.arange(p.ambient + 1) % 2 == 0, 1.0, -1.0)
    return Polynomial(p.coeffs * signs, p.ambient)


def derivative(p: Polynomial) -> Polynomial:
    if p.ambient == 0:
        return Polynomial([0.0], 0)
    k = np.arange(1, p.ambient + 1)
    return Polynomial(p.coeffs[1:] * k, p.ambient - 1)


def _rescaled(c: np.ndarray) -> np.ndarray:
    # numpy's complex / real goes through a reciprocal that overflows for
    # subnormal scales, so divide the parts separately
    m = np.max(np.abs(c))
    return c.real / m + 1j * (c.imag / m)


def cauchy_bound(p: Polynomial) -> float:
    d = p.degree
    if d < 1:
        raise AllCoefficientsZero("cauchy_bound needs exact degree >= 1")
    c = _rescaled(p.coeffs[: d + 1])
    return 1.0 + float(np.max(np.abs(c[:d] / c[d])))


def _cluster_tol(m: int) -> float:
    # forward error of an m-fold root is ~ eps**(1/m); never below 1e-7
    return max(1e-7, (1e3 * _EPS) ** (1.0 / m))


def _cluster(roots: np.ndarray, radius: float) -> list[list[int]]:
    """Group iterates of multiple roots, largest multiplicity first.

    A group of size m is accepted when its spread around the centroid is
    within ``_cluster_tol(m) * radius``.
    """
    remaining = list(range(roots.size))
    groups: list[list[int]] = []
    for m in range(roots.size, 1, -1):
        while len(remaining) >= m:
            best = None
            for i in remaining:
                near = sorted(remaining, key=lambda j: abs(roots[j] - roots[i]))[:m]
                center = np.mean(roots[near])
                spread = float(np.max(np.abs(roots[near] - center)))
                if spread <= _cluster_tol(m) * radius and (best is None or spread < best[0]):
                    best = (spread, near)
            if best is None:
                break
            groups.append(sorted(best[1]))
            remaining = [j for j in remaining if j not in best[1]]
    groups.extend([j] for j in remaining)
    return groups


def _polish_multiple(p: Polynomial, center: complex, m: int, steps: int = 3) -> complex:
    # an m-fold root of p is a simple root of its (m-1)-th derivative
    lo = p
    for _ in range(m - 1):
        lo = derivative(lo)
    hi = derivative(lo)
    best, best_res = center, abs(evaluate(lo, center))
    z = center
    for _ in range(steps):
        slope = evaluate(hi, z)
        if slope == 0:
            break
        z = z - evaluate(lo, z) / slope
        res = abs(evaluate(lo, z))
        if res < best_res:
            best, best_res = z, res
    return complex(best)


def roots(p: Polynomial, tol: float = 1e-10) -> RootSet:
    """All complex roots with multiplicity.

    Raises :class:`AllCoefficientsZero` for the zero polynomial and
    :class:`NonConvergence` when the backward residual exceeds
    ``tol * max|a_k| * (1 + max|root|)**deg``.
    """
    d = p.degree
    if d < 0:
        raise AllCoefficientsZero("roots of the zero polynomial")
    if d == 0:
        return RootSet(np.zeros(0, dtype=np.complex128), 0.0, ())
    c = p.coeffs[: d + 1]
    monic = _rescaled(c)
    monic = monic / monic[d]
    z, _ = aberth_batch(monic[None, :])
    z = z[0]
    radius = 1.0 + float(np.max(np.abs(monic[:d])))
    groups = _cluster(z, radius)
    trimmed = Polynomial(c, d)
    out = z.copy()
    mults = []
    for g in groups:
        center = complex(np.mean(z[g]))
        if len(g) > 1:
            center = _polish_multiple(trimmed, center, len(g))
        out[g] = center
        mults.append((center, len(g)))
    resid = float(np.max(np.abs(evaluate(trimmed, out))))
    raw_resid = float(np.max(np.abs(evaluate(trimmed, z))))
    if raw_resid < resid:
        # clustering made things worse: keep raw iterates, report simple roots
        out, resid = z, raw_resid
        mults = [(complex(r), 1) for r in z]
    scale = float(np.max(np.abs(c))) * (1.0 + float(np.max(np.abs(out)))) ** d
    if resid > tol * scale:
        raise NonConvergence(
            f"root residual {resid:.3e} exceeds {tol:.1e} * scale {scale:.3e}",
            best=out,
            residual=resid,
        )
    order = np.lexsort((out.imag, out.real))
    mults.sort(key=lambda t: (t[0].real, t[0].imag))
    return RootSet(out[order], resid, tuple(mults))


def elem_sym(k: int, points: Sequence[complex]) -> complex:
    """Elementary symmetric polynomial sigma_k by the product-expansion recurrence."""
    pts = list(points)
    if k < 0 or k > len(pts):
        raise IndexOutOfRange(f"sigma_{k} of {len(pts)} points")
    e = np.zeros(k + 1, dtype=np.complex128)
    e[0] = 1.0
    for y in pts:
        e[1:] = e[1:] + y * e[:-1]
    return complex(e[k])


def elem_sym_all(points: Sequence[complex]) -> np.ndarray:
    """sigma_0 .. sigma_n in one pass."""
    pts = list(points)
    e = np.zeros(len(pts) + 1, dtype=np.complex128)
    e[0] = 1.0
    for y in pts:
        e[1:] = e[1:] + y * e[:-1]
    return e


@lru_cache(maxsize=None)
def _pascal_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _pascal_row(n - 1)
    return (1,) + tuple(prev[i] + prev[i + 1] for i in range(n - 1)) + (1,)


def binom(n: int, k: int) -> int:
    if n > BINOM_MAX_N:
        raise BinomOverflow(f"binom supports n <= {BINOM_MAX_N}, got {n}")
    if n < 0 or k < 0 or k > n:
        raise IndexOutOfRange(f"binom({n}, {k})")
    return _pascal_row(n)[k]


def binom_row(n: int) -> np.ndarray:
    """binom(n, 0..n) as floats, for weight vectors."""
    if n > BINOM_MAX_N:
        raise BinomOverflow(f"binom supports n <= {BINOM_MAX_N}, got {n}")
    return np.array(_pascal_row(n), dtype=float)


# serialization


def poly_to_json(p: Polynomial) -> dict:
    return {
        "coeffs": [[float(c.real), float(c.imag)] for c in p.coeffs],
        "ambient": p.ambient,
    }


def poly_from_json(obj) -> Polynomial:
    """Accepts ``{"coeffs": [[re, im], ...], "ambient": n}`` or a bare pair list."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, dict):
        pairs = obj["coeffs"]
        ambient = obj.get("ambient")
    else:
        pairs, ambient = obj, None
    coeffs = []
    for item in pairs:
        if isinstance(item, (list, tuple)):
            re, im = (list(item) + [0.0])[:2]
            coeffs.append(complex(re, im))
        else:
            coeffs.append(complex(item))
    return Polynomial(coeffs, ambient)
