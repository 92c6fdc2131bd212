"""Batched Aberth-Ehrlich root finding.

Every row of ``coeffs`` is a monic polynomial, lowest degree first, so
``coeffs[:, -1] == 1``.  Two interchangeable implementations exist:

* ``aberth_numba`` -- per-polynomial loops, Gauss-Seidel updates, compiled
  with numba;
* ``aberth_numpy`` -- the same iteration vectorized across rows with
  simultaneous (Jacobi-style) updates.

``aberth_batch`` dispatches to whichever backend ``_accel`` selected.  Both
freeze a root once its backward error ``|p(z)| <= 4 eps sum |a_k| |z|^k``
is reached or its correction drops below ``eps * max(|z|, 1e-24 R)`` (R the
Cauchy radius), so multiple roots stop at noise level instead of burning the
iteration budget.
"""

from __future__ import annotations

import numpy as np

from ._accel import BACKEND, HAVE_NUMBA, njit

EPS = float(np.finfo(float).eps)
MAX_ITER = 200
_ANGLE_OFFSET = 0.4
_ANGLE_JITTER = 0.013
_FLOOR = 1e-24


def initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Perturbed circle of the Cauchy radius, one row per polynomial."""
    d = coeffs.shape[1] - 1
    radius = 1.0 + np.max(np.abs(coeffs[:, :d]), axis=1)
    k = np.arange(d)
    angles = 2.0 * np.pi * k / d + _ANGLE_OFFSET + _ANGLE_JITTER * k
    return radius[:, None] * np.exp(1j * angles)[None, :]


@njit
def _aberth_rows(coeffs, z, max_iter):
    m, dp1 = coeffs.shape
    d = dp1 - 1
    iters = np.zeros(m, np.int64)
    for i in range(m):
        big = 0.0
        for j in range(d):
            big = max(big, abs(coeffs[i, j]))
        floor = 1e-24 * (1.0 + big)
        done = np.zeros(d, np.bool_)
        it = 0
        while it < max_iter:
            active = 0
            for k in range(d):
                if done[k]:
                    continue
                zk = z[i, k]
                azk = abs(zk)
                p = coeffs[i, d]
                dp = 0.0 + 0.0j
                s = abs(coeffs[i, d])
                for j in range(d - 1, -1, -1):
                    dp = dp * zk + p
                    p = p * zk + coeffs[i, j]
                    s = s * azk + abs(coeffs[i, j])
                if abs(p) <= 4.0 * 2.220446049250313e-16 * s:
                    done[k] = True
                    continue
                active += 1
                if dp == 0:
                    z[i, k] = zk + 1e-8 * (1.0 + azk)
                    continue
                ratio = p / dp
                acc = 0.0 + 0.0j
                for j in range(d):
                    if j != k:
                        diff = zk - z[i, j]
                        if diff != 0:
                            acc += 1.0 / diff
                w = ratio / (1.0 - ratio * acc)
                znew = zk - w
                z[i, k] = znew
                if abs(w) <= 2.220446049250313e-16 * max(abs(znew), floor):
                    done[k] = True
            it += 1
            if active == 0:
                break
        iters[i] = it
    return iters


def aberth_numba(coeffs: np.ndarray, max_iter: int = MAX_ITER):
    if not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not available")
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(initial_guesses(coeffs))
    iters = _aberth_rows(coeffs, z, max_iter)
    return z, iters


def aberth_numpy(coeffs: np.ndarray, max_iter: int = MAX_ITER):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    m, dp1 = coeffs.shape
    d = dp1 - 1
    z = initial_guesses(coeffs)
    absc = np.abs(coeffs)
    active = np.ones((m, d), dtype=bool)
    iters = np.zeros(m, dtype=np.int64)
    eye = np.eye(d, dtype=bool)
    floor = _FLOOR * (1.0 + np.max(absc[:, :d], axis=1))
    for _ in range(max_iter):
        rows = np.flatnonzero(active.any(axis=1))
        if rows.size == 0:
            break
        iters[rows] += 1
        zr = z[rows]
        cr = coeffs[rows]
        ar = absc[rows]
        azr = np.abs(zr)
        p = np.repeat(cr[:, d, None], d, axis=1)
        dp = np.zeros_like(zr)
        s = np.repeat(ar[:, d, None], d, axis=1)
        for j in range(d - 1, -1, -1):
            dp = dp * zr + p
            p = p * zr + cr[:, j, None]
            s = s * azr + ar[:, j, None]
        act = active[rows] & ~(np.abs(p) <= 4.0 * EPS * s)
        diff = zr[:, :, None] - zr[:, None, :]
        diff[:, eye] = np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(diff == 0, 0.0, 1.0 / diff)
            acc = inv.sum(axis=2)
            ratio = p / dp
            w = ratio / (1.0 - ratio * acc)
        stuck = act & (dp == 0)
        w = np.where(stuck, -1e-8 * (1.0 + azr), w)
        w = np.where(act & np.isfinite(w), w, 0.0)
        znew = zr - w
        act &= ~((np.abs(w) <= EPS * np.maximum(np.abs(znew), floor[rows, None])) & ~stuck)
        z[rows] = znew
        active[rows] = act
    return z, iters


def aberth_batch(coeffs: np.ndarray, max_iter: int = MAX_ITER, backend: str | None = None):
    """Roots of each monic row of ``coeffs``; returns ``(roots, iterations)``."""
    backend = backend or BACKEND
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=np.complex128))
    if coeffs.shape[1] < 2:
        raise ValueError("aberth_batch needs degree >= 1")
    if backend == "numba":
        return aberth_numba(coeffs, max_iter)
    if backend == "numpy":
        return aberth_numpy(coeffs, max_iter)
    raise ValueError(f"unknown backend {backend!r}")


def horner_batch(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Evaluate one coefficient vector (lowest first) at an array of points."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros_like(z)
    for c in np.asarray(coeffs)[::-1]:
        out = out * z + c
    return out

