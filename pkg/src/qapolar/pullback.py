"""The pulled-back apolarity form and its operator ``T_{q,n}`` on C[z]_n.

For a monic ``q`` of degree ``d`` the multi-point form is

    S_{q,n}(f)(u_1..u_n) = < f o q, prod_j (q - u_j)^{#v} >_{nd}

and ``T_{q,n}(f)`` is its restriction to the diagonal.  The operator is upper
triangular in the monomial basis and satisfies
``[f o q, g o q]_{nd} = [T_{q,n} f, g]_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .apolarity import bracket, fischer_ip, fischer_norm
from .errors import (
    AmbientExceeded,
    BinomOverflow,
    DimensionMismatch,
    NonMonicMap,
    UnsupportedShape,
)
from .polycore import BINOM_MAX_N, Polynomial, binom, binom_row, check, compose, sharp

MONOMIAL = "monomial"
ORTHONORMAL = "fischer-orthonormal"


def require_monic(q: Polynomial, rtol: float = 1e-12) -> Polynomial:
    """Trimmed copy of ``q``; raises :class:`NonMonicMap` unless monic of degree >= 1."""
    d = q.degree
    if d < 1:
        raise NonMonicMap("the map q must have degree >= 1")
    if abs(q.coeffs[d] - 1.0) > rtol:
        raise NonMonicMap(f"leading coefficient of q is {q.coeffs[d]}, expected 1")
    c = np.array(q.coeffs[: d + 1])
    c[d] = 1.0
    return Polynomial(c, d)


def _fit(f: Polynomial, n: int) -> Polynomial:
    if f.ambient > n and np.any(f.coeffs[n + 1 :] != 0):
        raise AmbientExceeded(f"ambient {f.ambient} exceeds n={n}")
    return Polynomial(f.coeffs[: n + 1], n)


def reflected(p: Polynomial) -> Polynomial:
    """``p^{#v}`` relative to the ambient degree of ``p``."""
    return check(sharp(p))


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray
    basis: str
    n: int
    q: Polynomial

    def to_orthonormal(self) -> "OperatorMatrix":
        if self.basis == ORTHONORMAL:
            return self
        s = np.sqrt(binom_row(self.n))
        return OperatorMatrix(self.entries * s[None, :] / s[:, None], ORTHONORMAL, self.n, self.q)

    def to_monomial(self) -> "OperatorMatrix":
        if self.basis == MONOMIAL:
            return self
        s = np.sqrt(binom_row(self.n))
        return OperatorMatrix(self.entries * s[:, None] / s[None, :], MONOMIAL, self.n, self.q)

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries)


@dataclass(frozen=True)
class DiscriminantData:
    delta: complex
    gamma_cap: complex | None
    degree: int


def discriminant_data(q: Polynomial) -> DiscriminantData:
    q = require_monic(q)
    d = q.degree
    if d == 2:
        g, b = q.coeffs[0], q.coeffs[1]
        return DiscriminantData(complex(b * b - 4 * g), None, 2)
    if d == 3:
        dl, g, b = q.coeffs[0], q.coeffs[1], q.coeffs[2]
        delta = b**2 * g**2 - 4 * g**3 - 4 * b**3 * dl + 18 * b * g * dl - 27 * dl**2
        gamma_cap = 2 * b**3 - 9 * b * g + 27 * dl
        return DiscriminantData(complex(delta), complex(gamma_cap), 3)
    raise UnsupportedShape(f"discriminant data only for degree 2 or 3, got {d}")


def s_eval(q: Polynomial, n: int, f: Polynomial, u: Sequence[complex]) -> complex:
    """Evaluate ``S_{q,n}(f)`` at ``(u_1..u_n)`` straight from its defining pairing."""
    q = require_monic(q)
    u = list(u)
    if len(u) != n:
        raise DimensionMismatch(f"expected {n} points, got {len(u)}")
    d = q.degree
    fq = compose(_fit(f, n), q)
    kernel = Polynomial([1.0], 0)
    for uj in u:
        kernel = kernel * reflected(q - Polynomial([uj], d))
    return fischer_ip(fq, kernel, n * d)


def t_matrix(q: Polynomial, n: int) -> OperatorMatrix:
    """Monomial-basis matrix of ``T_{q,n}``; column ``k`` holds ``T(z^k)``.

    Writes ``(q - u)^{#v} = P0 + (-1)^(d+1) conj(u) z^d`` and expands the
    n-th power binomially, so the coefficient of ``u^m`` in ``T(z^k)`` is a
    finite Fischer pairing of ``q^k`` against ``binom(n,m) (+-1)^m z^{md} P0^{n-m}``.
    """
    q = require_monic(q)
    d = q.degree
    nd = n * d
    if n < 1:
        raise ValueError("n must be >= 1")
    if nd > BINOM_MAX_N:
        raise BinomOverflow(f"n*d = {nd} exceeds {BINOM_MAX_N}")
    weights = binom_row(nd)
    p0 = reflected(q).coeffs
    sign = (-1.0) ** (d + 1)

    # kernels[m] = binom(n, m) sign^m z^{md} P0^{n-m}, padded to nd + 1
    p0_pows = [np.array([1.0 + 0j])]
    for _ in range(n):
        p0_pows.append(np.convolve(p0_pows[-1], p0))
    kernels = np.zeros((n + 1, nd + 1), dtype=np.complex128)
    for m in range(n + 1):
        body = binom(n, m) * sign**m * p0_pows[n - m]
        kernels[m, m * d : m * d + body.size] = body

    entries = np.zeros((n + 1, n + 1), dtype=np.complex128)
    qk = np.array([1.0 + 0j])
    for k in range(n + 1):
        padded = np.zeros(nd + 1, dtype=np.complex128)
        padded[: qk.size] = qk
        entries[:, k] = (np.conj(kernels) * (padded / weights)[None, :]).sum(axis=1)
        qk = np.convolve(qk, q.coeffs)
    return OperatorMatrix(entries, MONOMIAL, n, q)


def t_matrix_interp(q: Polynomial, n: int) -> OperatorMatrix:
    """Independent route: sample ``S(z^k)(u,..,u)`` at roots of unity and invert the DFT."""
    q = require_monic(q)
    d = q.degree
    nodes = np.exp(2j * np.pi * np.arange(n + 1) / (n + 1))
    entries = np.zeros((n + 1, n + 1), dtype=np.complex128)
    for k in range(n + 1):
        zk = Polynomial.monomial(k, n)
        vals = np.array([s_eval(q, n, zk, [u] * n) for u in nodes])
        entries[:, k] = np.fft.fft(vals) / (n + 1)
    return OperatorMatrix(entries, MONOMIAL, n, q)


def t_apply(q: Polynomial, n: int, f: Polynomial) -> Polynomial:
    m = t_matrix(q, n).entries
    return Polynomial(m @ _fit(f, n).coeffs, n)


def t_diagonal(n: int, d: int) -> np.ndarray:
    """Eigenvalues ``(-1)^{k(d+1)} binom(n,k) / binom(nd,kd)`` from exact integers."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    out = []
    for k in range(n + 1):
        val = Fraction(binom(n, k), binom(n * d, k * d))
        out.append(float(val) * (-1) ** (k * (d + 1)))
    return np.array(out)


def t_matrix_closed_form(q: Polynomial, n: int) -> OperatorMatrix:
    """Closed-form matrices for quadratic and cubic ``q`` with ``n`` in {2, 3}."""
    q = require_monic(q)
    d = q.degree
    if d not in (2, 3) or n not in (2, 3):
        raise UnsupportedShape(f"closed form known only for d, n in {{2, 3}}; got d={d}, n={n}")
    dd = discriminant_data(q)
    D, G = dd.delta, dd.gamma_cap
    if d == 2 and n == 2:
        m = [[1, -D / 3, D**2 / 6], [0, -1 / 3, 2 * D / 3], [0, 0, 1]]
    elif d == 2:
        m = [
            [1, -3 * D / 10, D**2 / 10, -(D**3) / 20],
            [0, -1 / 5, D / 5, -3 * D**2 / 10],
            [0, 0, 1 / 5, -9 * D / 10],
            [0, 0, 0, -1],
        ]
    elif n == 2:
        m = [[1, G / 30, -D / 15], [0, 1 / 10, -G / 15], [0, 0, 1]]
    else:
        m = [
            [1, G / 28, -D / 28, 0],
            [0, 1 / 28, 0, -3 * D / 28],
            [0, 0, 1 / 28, -3 * G / 28],
            [0, 0, 0, 1],
        ]
    return OperatorMatrix(np.array(m, dtype=np.complex128), MONOMIAL, n, q)


def q_bracket(q: Polynomial, f: Polynomial, g: Polynomial, n: int) -> complex:
    """``[f o q, g o q]_{nd}`` computed on the composed polynomials."""
    q = require_monic(q)
    nd = n * q.degree
    return bracket(compose(_fit(f, n), q), compose(_fit(g, n), q), nd)


def is_q_apolar(q: Polynomial, f: Polynomial, g: Polynomial, n: int, tol: float = 1e-10) -> bool:
    q = require_monic(q)
    nd = n * q.degree
    fq, gq = compose(_fit(f, n), q), compose(_fit(g, n), q)
    return abs(bracket(fq, gq, nd)) <= tol * fischer_norm(fq, nd) * fischer_norm(gq, nd)


def check_pullback_identity(q: Polynomial, n: int, f: Polynomial, g: Polynomial) -> float:
    """``|LHS - RHS| / (1 + |LHS| + |RHS|)`` for ``[f o q, g o q]_{nd} = [T f, g]_n``."""
    lhs = q_bracket(q, f, g, n)
    rhs = bracket(t_apply(q, n, f), _fit(g, n), n)
    return abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs))
