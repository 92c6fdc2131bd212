"""Fischer inner product, apolarity bracket and symmetrization on C[z]_n."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AmbientExceeded, DimensionMismatch
from .polycore import Polynomial, binom_row, elem_sym_all


def _coeffs_in(f: Polynomial, n: int) -> np.ndarray:
    if f.ambient > n:
        # a polynomial may still fit if its extra coefficients vanish
        if np.any(f.coeffs[n + 1 :] != 0):
            raise AmbientExceeded(f"ambient {f.ambient} exceeds n={n}")
        return f.coeffs[: n + 1]
    return f.with_ambient(n).coeffs


def fischer_ip(f: Polynomial, g: Polynomial, n: int) -> complex:
    """``sum_k a_k conj(b_k) / binom(n, k)``; linear in ``f``, antilinear in ``g``."""
    a, b = _coeffs_in(f, n), _coeffs_in(g, n)
    return complex(np.sum(a * np.conj(b) / binom_row(n)))


def fischer_norm(f: Polynomial, n: int | None = None) -> float:
    n = f.ambient if n is None else n
    return float(np.sqrt(max(fischer_ip(f, f, n).real, 0.0)))


def bracket(f: Polynomial, g: Polynomial, n: int) -> complex:
    """Apolarity form ``[f, g]_n = sum_k (-1)^k a_k b_{n-k} / binom(n, k)``.

    Bilinear, no conjugation; ``[f, g]_n = (-1)^n [g, f]_n``.
    """
    a, b = _coeffs_in(f, n), _coeffs_in(g, n)
    signs = np.where(np.arange(n + 1) % 2 == 0, 1.0, -1.0)
    return complex(np.sum(signs * a * b[::-1] / binom_row(n)))


@dataclass(frozen=True)
class SymForm:
    """``sum_k c_k sigma_k(y_1..y_n)``: the multiaffine symmetric lift of a polynomial."""

    ambient: int
    sigma_coeffs: np.ndarray

    def __call__(self, y: Sequence[complex]) -> complex:
        y = list(y)
        if len(y) != self.ambient:
            raise DimensionMismatch(f"expected {self.ambient} points, got {len(y)}")
        return complex(np.dot(self.sigma_coeffs, elem_sym_all(y)))

    def diagonal(self) -> Polynomial:
        """Restriction to ``y_1 = ... = y_n = z``."""
        return Polynomial(self.sigma_coeffs * binom_row(self.ambient), self.ambient)


def symmetrize(f: Polynomial, n: int) -> SymForm:
    a = _coeffs_in(f, n)
    return SymForm(n, a / binom_row(n))


def sym_eval(f: Polynomial, n: int, y: Sequence[complex]) -> complex:
    """Evaluate the symmetrization of ``f`` at ``y`` through the Fischer pairing

    ``Sym_n(f)(y) = <f, prod_k (1 + conj(y_k) z)>_n``.
    """
    y = list(y)
    if len(y) != n:
        raise DimensionMismatch(f"expected {n} points, got {len(y)}")
    kernel = np.array([1.0], dtype=np.complex128)
    for yk in y:
        kernel = np.convolve(kernel, np.array([1.0, np.conj(yk)]))
    return fischer_ip(f, Polynomial(kernel, n), n)


def is_apolar(f: Polynomial, g: Polynomial, n: int, tol: float = 1e-10) -> bool:
    """Norm-relative test ``|[f, g]_n| <= tol * ||f|| * ||g||``."""
    fn = fischer_norm(Polynomial(_coeffs_in(f, n), n), n)
    gn = fischer_norm(Polynomial(_coeffs_in(g, n), n), n)
    return abs(bracket(f, g, n)) <= tol * fn * gn
