"""Skew eigenfunctions of ``T_{q,n}`` with respect to ``C: p -> p^{#v}``.

All linear algebra happens in the Fischer-orthonormal basis
``e_k = sqrt(binom(n, k)) z^k``, where the Fischer adjoint is the conjugate
transpose and ``C`` acts as ``x -> K conj(x)`` with the signed anti-diagonal
``K[n-k, k] = (-1)^(n-k)``.  Monomial coordinates are only used for I/O.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .apolarity import bracket, fischer_ip
from .errors import AmbientExceeded, OddDegreeMap, SingularT
from .polycore import Polynomial, binom_row, compose
from .pullback import require_monic, reflected, t_matrix

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class ConjugationSpec:
    n: int
    epsilon: int

    @classmethod
    def for_degree(cls, n: int) -> "ConjugationSpec":
        return cls(n, 1 if n % 2 == 0 else -1)

    @property
    def matrix(self) -> np.ndarray:
        k = np.arange(self.n + 1)
        K = np.zeros((self.n + 1, self.n + 1))
        K[self.n - k, k] = (-1.0) ** (self.n - k)
        return K

    def apply(self, x: np.ndarray) -> np.ndarray:
        """``C`` on orthonormal coordinates (antilinear)."""
        return self.matrix @ np.conj(x)


def conjugate_c(f: Polynomial, n: int) -> Polynomial:
    """``f^{#v}`` in ``C[z]_n``."""
    if f.ambient > n and np.any(f.coeffs[n + 1 :] != 0):
        raise AmbientExceeded(f"ambient {f.ambient} exceeds n={n}")
    return reflected(Polynomial(f.coeffs[: n + 1], n))


def to_orthonormal_coords(f: Polynomial, n: int) -> np.ndarray:
    return Polynomial(f.coeffs[: n + 1], n).coeffs / np.sqrt(binom_row(n))


def from_orthonormal_coords(x: np.ndarray, n: int) -> Polynomial:
    return Polynomial(np.asarray(x) * np.sqrt(binom_row(n)), n)


# Jacobi rotations


def _rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    """Unitary 2x2 ``G`` with ``G^H [[app, apq], [conj apq, aqq]] G`` diagonal."""
    mag = abs(apq)
    phase = apq / mag
    theta = (aqq - app) / (2.0 * mag)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])


def jacobi_eigh(H: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60):
    """Cyclic complex Jacobi for a Hermitian matrix; eigenvalues ascending.

    Stops once the off-diagonal Frobenius mass is below ``tol * ||H||_F``.
    """
    A = np.array(H, dtype=np.complex128)
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    norm = np.linalg.norm(A)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(A - np.diag(np.diag(A))) ** 2))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0:
                    continue
                G = _rotation(A[p, p].real, A[q, q].real, A[p, q])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = np.conj(G.T) @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p], A[q, q] = A[p, p].real, A[q, q].real
                V[:, idx] = V[:, idx] @ G
    w = np.real(np.diag(A))
    order = np.argsort(w)
    return w[order], V[:, order]


def jacobi_svd(T: np.ndarray, max_sweeps: int = 60):
    """One-sided (Hestenes) Jacobi: ``T = U diag(s) V^H``, ``s`` descending.

    Rotating columns of ``T`` applies the same Jacobi rotations to ``T^H T``
    without forming it, so small singular values keep their relative accuracy.
    """
    W = np.array(T, dtype=np.complex128)
    n = W.shape[1]
    V = np.eye(n, dtype=np.complex128)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = np.real(np.vdot(W[:, p], W[:, p]))
                beta = np.real(np.vdot(W[:, q], W[:, q]))
                gamma = np.vdot(W[:, p], W[:, q])
                if abs(gamma) <= _EPS * np.sqrt(alpha * beta) or gamma == 0:
                    continue
                rotated = True
                G = _rotation(alpha, beta, gamma)
                idx = [p, q]
                W[:, idx] = W[:, idx] @ G
                V[:, idx] = V[:, idx] @ G
        if not rotated:
            break
    s = np.linalg.norm(W, axis=0)
    order = np.argsort(-s, kind="stable")
    s, W, V = s[order], W[:, order], V[:, order]
    with np.errstate(divide="ignore", invalid="ignore"):
        U = np.where(s > 0, W / s, 0.0)
    return U, s, V


# complex symmetry and the decomposition


def _orthonormal_t(q: Polynomial, n: int) -> np.ndarray:
    return t_matrix(q, n).to_orthonormal().entries


def verify_complex_symmetry(q: Polynomial, n: int, allow_odd: bool = False) -> float:
    """Frobenius norm of ``T^* - C T C`` in orthonormal coordinates.

    Odd ``deg q`` is rejected unless ``allow_odd`` is set for diagnostics.
    """
    q = require_monic(q)
    if q.degree % 2 and not allow_odd:
        raise OddDegreeMap(f"complex symmetry needs even deg q, got {q.degree}")
    T = _orthonormal_t(q, n)
    K = ConjugationSpec.for_degree(n).matrix
    return float(np.linalg.norm(np.conj(T.T) - K @ np.conj(T) @ K))


@dataclass(frozen=True)
class SkewBasis:
    polys: list
    singulars: np.ndarray
    coords: np.ndarray  # orthonormal coordinates, one column per f_k

    def __len__(self) -> int:
        return len(self.polys)


@dataclass(frozen=True)
class PolarParts:
    """``T = U |T|`` and ``J = U^* C`` in orthonormal coordinates; ``J x = Jm conj(x)``."""

    T: np.ndarray
    U: np.ndarray
    abs_t: np.ndarray
    Jm: np.ndarray
    singulars: np.ndarray
    right_vectors: np.ndarray


def polar_parts(q: Polynomial, n: int) -> PolarParts:
    q = require_monic(q)
    T = _orthonormal_t(q, n)
    Us, s, V = jacobi_svd(T)
    # T is always invertible; only a broken upstream matrix gets here
    if not np.all(np.isfinite(s)) or s[-1] == 0.0:
        raise SingularT("T_{q,n} is numerically singular; it should always be invertible")
    abs_t = (V * s) @ np.conj(V.T)
    # Us has orthonormal columns to working precision; T V / s would not
    U = Us @ np.conj(V.T)
    K = ConjugationSpec.for_degree(n).matrix
    return PolarParts(T, U, abs_t, np.conj(U.T) @ K, s, V)


def _clusters(s: np.ndarray, rel_tol: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, s.size):
        if s[groups[-1][-1]] - s[i] <= rel_tol * s[groups[-1][-1]]:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _fixed_vectors(Jm: np.ndarray, span: np.ndarray) -> np.ndarray:
    """Orthonormal ``J``-fixed basis of the ``J``-invariant subspace spanned by ``span``."""
    proj = span @ np.conj(span.T)

    def J(x):
        return proj @ (Jm @ np.conj(x))

    found: list[np.ndarray] = []
    candidates = [span[:, i] for i in range(span.shape[1])]
    for _ in range(span.shape[1]):
        best, best_norm = None, -1.0
        for h in candidates:
            r = h - sum(np.vdot(f, h) * f for f in found) if found else h
            nr = np.linalg.norm(r)
            if nr > best_norm:
                best, best_norm = r, nr
        h = best / best_norm
        g = 0.5 * (h + J(h))
        if np.linalg.norm(g) <= 0.5:
            ih = 1j * h
            g = 0.5 * (ih + J(ih))
        for f in found:
            g = g - np.vdot(f, g) * f
        g = g / np.linalg.norm(g)
        g = 0.5 * (g + J(g))
        g = g / np.linalg.norm(g)
        found.append(g)
    return np.column_stack(found)


def skew_eigenbasis(q: Polynomial, n: int, cluster_tol: float = 1e-8) -> SkewBasis:
    """Fischer-orthonormal ``f_0..f_n`` with ``T f_k = lambda_k C f_k``, ``lambda`` descending."""
    q = require_monic(q)
    if q.degree % 2:
        raise OddDegreeMap(f"skew eigenbasis needs even deg q, got {q.degree}")
    parts = polar_parts(q, n)
    s, V = parts.singulars, parts.right_vectors
    cols = []
    for group in _clusters(s, cluster_tol):
        cols.append(_fixed_vectors(parts.Jm, V[:, group]))
    X = np.column_stack(cols)
    polys = [from_orthonormal_coords(X[:, k], n) for k in range(n + 1)]
    return SkewBasis(polys, s.copy(), X)


@dataclass(frozen=True)
class DoubleOrthogonalityReport:
    gram: np.ndarray
    brackets: np.ndarray
    gram_residual: float
    bracket_residual: float


def verify_double_orthogonality(q: Polynomial, n: int, basis: SkewBasis) -> DoubleOrthogonalityReport:
    """Fischer Gram matrix and pulled-back bracket matrix of a skew basis."""
    q = require_monic(q)
    nd = n * q.degree
    m = len(basis)
    gram = np.empty((m, m), dtype=np.complex128)
    br = np.empty((m, m), dtype=np.complex128)
    composed = [compose(f, q) for f in basis.polys]
    for j in range(m):
        for k in range(m):
            gram[j, k] = fischer_ip(basis.polys[j], basis.polys[k], n)
            br[j, k] = bracket(composed[j], composed[k], nd)
    return DoubleOrthogonalityReport(
        gram,
        br,
        float(np.max(np.abs(gram - np.eye(m)))),
        float(np.max(np.abs(br - np.diag(basis.singulars)))),
    )
