"""Circular domains and their images under a monic polynomial map.

For a circular domain ``D`` and monic ``q`` of degree ``d``:

* ``q_(k)(D)`` -- points ``u`` with exactly ``k`` roots of ``q - u`` in ``D``;
* ``q(D)`` is the union of ``q_(k)(D)`` for ``k >= 1``;
* ``q_o(D) = q_(d)(D)`` -- points whose whole fiber lies in ``D``.

Fiber counts are obtained by direct root finding.  Points with a fiber root
too close to the boundary are reported as indeterminate instead of being
forced to one side.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._kernels import aberth_batch
from .errors import DegenerateBoundary, InvalidDomain, NotHermitian
from .polycore import Polynomial, evaluate
from .pullback import require_monic

DEFAULT_GUARD = 1e-9
INDETERMINATE = -1


@dataclass(frozen=True)
class CircularDomain:
    """``{z : A|z|^2 + 2 Re(B z) + C < 0}`` (``strict``) or ``<= 0``."""

    A: float
    B: complex
    C: float
    strict: bool = True

    def __post_init__(self):
        A, B, C = float(self.A), complex(self.B), float(self.C)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        changes_sign = A < 0 or (A > 0 and abs(B) ** 2 > A * C) or (A == 0 and B != 0)
        if not changes_sign:
            raise InvalidDomain(f"form ({A}, {B}, {C}) does not describe a proper circular domain")

    @classmethod
    def disk(cls, center: complex = 0.0, radius: float = 1.0, closed: bool = False) -> "CircularDomain":
        c = complex(center)
        return cls(1.0, np.conj(-c), abs(c) ** 2 - radius**2, not closed)

    @classmethod
    def unit_disk(cls, closed: bool = False) -> "CircularDomain":
        return cls.disk(0.0, 1.0, closed)

    @classmethod
    def exterior(cls, center: complex = 0.0, radius: float = 1.0, closed: bool = False) -> "CircularDomain":
        """``|z - c| > r`` (or ``>=`` when closed)."""
        return cls.disk(center, radius, closed=not closed).complement()

    @classmethod
    def halfplane(cls, B: complex, C: float = 0.0, closed: bool = False) -> "CircularDomain":
        """``2 Re(B z) + C < 0``; e.g. ``B = 0.5`` gives ``Re z < -C``."""
        return cls(0.0, B, C, not closed)

    @property
    def is_disk_like(self) -> bool:
        return self.A != 0.0

    @property
    def center(self) -> complex:
        if self.A == 0.0:
            raise DegenerateBoundary("a halfplane has no center")
        return complex(-np.conj(self.B) / self.A)

    @property
    def radius(self) -> float:
        if self.A == 0.0:
            raise DegenerateBoundary("a halfplane has no radius")
        r2 = abs(self.center) ** 2 - self.C / self.A
        if r2 <= 0:
            raise DegenerateBoundary("empty boundary circle")
        return float(np.sqrt(r2))

    @property
    def bounded(self) -> bool:
        return self.A > 0

    def form(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return self.A * np.abs(z) ** 2 + 2.0 * np.real(self.B * z) + self.C

    def form_scale(self, z):
        az = np.abs(np.asarray(z, dtype=np.complex128))
        return abs(self.A) * az**2 + 2.0 * abs(self.B) * az + abs(self.C)

    def contains(self, z):
        v = self.form(z)
        return v < 0 if self.strict else v <= 0

    def boundary_distance(self, z):
        """Euclidean distance from ``z`` to the boundary circle or line."""
        z = np.asarray(z, dtype=np.complex128)
        if self.A == 0.0:
            return np.abs(self.form(z)) / (2.0 * abs(self.B))
        return np.abs(np.abs(z - self.center) - self.radius)

    def complement(self) -> "CircularDomain":
        return CircularDomain(-self.A, -self.B, -self.C, not self.strict)

    def is_unit_disk(self) -> bool:
        return self.A > 0 and abs(self.B) == 0 and np.isclose(self.C / self.A, -1.0, rtol=0, atol=1e-15)


def domain_contains(D: CircularDomain, z) -> bool:
    return bool(D.contains(z))


def complement(D: CircularDomain) -> CircularDomain:
    return D.complement()


# fiber counting


@dataclass(frozen=True)
class FiberClass:
    count: int | None
    margin: float

    @property
    def indeterminate(self) -> bool:
        return self.count is None


class Membership(str, enum.Enum):
    IN = "in"
    OUT = "out"
    BOUNDARY = "boundary"


def fiber_roots(q: Polynomial, us) -> np.ndarray:
    """Roots of ``q - u`` for every ``u``; shape ``us.shape + (d,)``."""
    q = require_monic(q)
    us = np.asarray(us, dtype=np.complex128)
    flat = us.reshape(-1)
    rows = np.repeat(q.coeffs[None, :], flat.size, axis=0)
    rows[:, 0] -= flat
    z, _ = aberth_batch(rows)
    return z.reshape(us.shape + (q.degree,))


def fiber_counts(q: Polynomial, D: CircularDomain, us, guard: float = DEFAULT_GUARD):
    """Vectorized fiber classification.

    Returns ``(counts, margins)``; ``counts`` is ``INDETERMINATE`` (-1) where a
    root satisfies ``|form| <= guard * form_scale``.
    """
    z = fiber_roots(q, us)
    vals = D.form(z)
    near = np.abs(vals) <= guard * D.form_scale(z)
    inside = vals < 0 if D.strict else vals <= 0
    counts = inside.sum(axis=-1).astype(np.int64)
    counts[near.any(axis=-1)] = INDETERMINATE
    margins = D.boundary_distance(z).min(axis=-1)
    return counts, margins


def fiber_class(q: Polynomial, D: CircularDomain, u: complex, guard: float = DEFAULT_GUARD) -> FiberClass:
    counts, margins = fiber_counts(q, D, np.array([u]), guard)
    c = int(counts[0])
    return FiberClass(None if c == INDETERMINATE else c, float(margins[0]))


def in_q_circ(q: Polynomial, D: CircularDomain, u: complex, guard: float = DEFAULT_GUARD) -> Membership:
    """Whether the whole fiber of ``u`` lies in ``D``."""
    fc = fiber_class(q, D, u, guard)
    if fc.indeterminate:
        return Membership.BOUNDARY
    return Membership.IN if fc.count == require_monic(q).degree else Membership.OUT


def in_image(q: Polynomial, D: CircularDomain, u: complex, guard: float = DEFAULT_GUARD) -> Membership:
    """Whether some fiber point of ``u`` lies in ``D``, i.e. ``u`` in ``q(D)``."""
    fc = fiber_class(q, D, u, guard)
    if fc.indeterminate:
        return Membership.BOUNDARY
    return Membership.IN if fc.count >= 1 else Membership.OUT


# Schur-Cohn


@dataclass(frozen=True)
class HermitianMatrix:
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def schur_cohn(q: Polynomial) -> HermitianMatrix:
    """Coefficient matrix of ``(q#(x) conj(q#(conj y)) - q(x) conj(q(conj y))) / (1 - xy)``.

    Entry ``(j, k)`` is the coefficient of ``x^j y^k``; the division by
    ``1 - xy`` is the recurrence ``a_jk = N_jk + a_{j-1,k-1}``.
    """
    q = require_monic(q)
    d = q.degree
    b = q.coeffs
    v = np.conj(b[::-1])
    numer = np.outer(v, np.conj(v)) - np.outer(b, np.conj(b))
    a = np.zeros((d, d), dtype=np.complex128)
    for j in range(d):
        for k in range(j, d):
            a[j, k] = numer[j, k] + (a[j - 1, k - 1] if j > 0 else 0.0)
    diag = np.real(np.diag(a))
    a = np.triu(a, 1)
    a = a + np.conj(a.T) + np.diag(diag)
    return HermitianMatrix(a)


def is_positive_definite(H, tol: float = 1e-12) -> bool:
    """Hermitian Cholesky; every pivot must exceed ``tol * trace / size``."""
    m = np.array(H.entries if isinstance(H, HermitianMatrix) else H, dtype=np.complex128)
    size = m.shape[0]
    scale = np.max(np.abs(m)) if m.size else 0.0
    if np.max(np.abs(m - np.conj(m.T)), initial=0.0) > 1e-14 * max(scale, 1e-300):
        raise NotHermitian("matrix is not Hermitian")
    trace = float(np.real(np.trace(m)))
    if trace <= 0:
        return False
    floor = tol * trace / size
    L = np.zeros_like(m)
    for j in range(size):
        pivot = np.real(m[j, j] - np.sum(np.abs(L[j, :j]) ** 2))
        if not pivot > floor:
            return False
        L[j, j] = np.sqrt(pivot)
        for i in range(j + 1, size):
            L[i, j] = (m[i, j] - np.sum(L[i, :j] * np.conj(L[j, :j]))) / L[j, j]
    return True


@dataclass(frozen=True)
class NonemptyWitness:
    lam: complex


@dataclass(frozen=True)
class EmptyUpToGrid:
    resolution: int


def q_circ_empty_scan(q: Polynomial, resolution: int = 40, tol: float = 1e-9):
    """Search for ``lambda`` with ``SC(q - lambda)`` positive definite.

    Probes ``q(0)`` first, then a ``resolution x resolution`` grid over the
    square of half-width ``sum |b_j|`` ordered by distance from ``q(0)``.
    Emptiness is only certified at grid resolution.
    """
    q = require_monic(q)
    half = float(np.sum(np.abs(q.coeffs)))
    axis = np.linspace(-half, half, resolution)
    grid = (axis[None, :] + 1j * axis[:, None]).ravel()
    start = complex(q.coeffs[0])
    order = np.argsort(np.abs(grid - start), kind="stable")
    for lam in np.concatenate([[start], grid[order]]):
        shifted = q - Polynomial([lam], q.degree)
        if is_positive_definite(schur_cohn(shifted), tol):
            return NonemptyWitness(complex(lam))
    return EmptyUpToGrid(resolution)


# boundary curves


def boundary_points(D: CircularDomain, m: int, window: float = 10.0) -> np.ndarray:
    """``m`` points on the boundary of ``D``: by angle on a circle, by arclength on a line."""
    if m < 1:
        raise ValueError("need at least one sample")
    if D.A != 0.0:
        theta = 2.0 * np.pi * np.arange(m) / m
        return D.center + D.radius * np.exp(1j * theta)
    if D.B == 0:
        raise DegenerateBoundary("halfplane with B = 0")
    foot = -D.C * np.conj(D.B) / (2.0 * abs(D.B) ** 2)
    tangent = 1j * np.conj(D.B) / abs(D.B)
    return foot + np.linspace(-window, window, m) * tangent


def boundary_samples(q: Polynomial, D: CircularDomain, m: int, window: float = 10.0) -> np.ndarray:
    """Images ``q(z_i)`` of ``m`` points parameterizing the boundary of ``D``."""
    return np.asarray(evaluate(q, boundary_points(D, m, window)))


def inclusion_radii(q: Polynomial, D: CircularDomain, center: complex = 0.0, m: int = 4096):
    """``(inner, outer)`` distances from ``center`` to the curve ``q(boundary D)``.

    When ``center`` lies in ``q_o(D)`` the open disk of radius ``inner`` is
    contained in ``q_o(D)``, since a region's boundary lies on that curve.
    For bounded ``D``, ``q(D)`` lies inside the disk of radius ``outer``.
    """
    w = boundary_samples(q, D, m)
    dist = np.abs(w - center)
    return float(dist.min()), float(dist.max())


@dataclass(frozen=True)
class CurveFixture:
    """Real bivariate polynomial ``sum c_ij x^i y^j`` given as ``{(i, j): c}``."""

    name: str
    coeffs: dict

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for (i, j), c in self.coeffs.items():
            out = out + c * x**i * y**j
        return out

    def at(self, w):
        w = np.asarray(w, dtype=np.complex128)
        return self(w.real, w.imag)


# image of |z| = 1 under z^2 + z/2
QUARTIC_IMAGE = CurveFixture(
    "quartic image of the unit circle under z^2 + z/2",
    {(4, 0): 4, (0, 4): 4, (2, 2): 8, (2, 0): -9, (0, 2): -9, (1, 0): -2, (0, 0): 3},
)

# image of |z| = 1 under z^3 + z/2
SEXTIC_IMAGE = CurveFixture(
    "sextic image of the unit circle under z^3 + z/2",
    {
        (6, 0): 16, (4, 2): 48, (4, 0): -52, (2, 4): 48, (2, 2): -104, (2, 0): 40,
        (0, 6): 16, (0, 4): -52, (0, 2): 48, (0, 0): -9,
    },
)

# the other component of the preimage of the sextic
OCTIC_PREIMAGE = CurveFixture(
    "octic preimage component for z^3 + z/2",
    {
        (8, 0): 16, (6, 0): 16, (6, 2): 64, (4, 4): 96, (4, 2): -16, (4, 0): 8,
        (2, 6): 64, (2, 4): -80, (2, 2): -16, (2, 0): -28, (0, 8): 16, (0, 6): -48,
        (0, 4): 40, (0, 2): -12, (0, 0): 9,
    },
)


# rasters


@dataclass(frozen=True)
class FiberGrid:
    """Per-pixel fiber counts; ``counts == -1`` marks indeterminate pixels.

    Row 0 is the top edge (``y1``) of the box, matching image orientation.
    """

    counts: np.ndarray
    margins: np.ndarray
    bbox: tuple[float, float, float, float]
    degree: int

    def __getitem__(self, idx) -> FiberClass:
        c = int(self.counts[idx])
        return FiberClass(None if c == INDETERMINATE else c, float(self.margins[idx]))

    @property
    def shape(self):
        return self.counts.shape

    @property
    def indeterminate(self) -> np.ndarray:
        return self.counts == INDETERMINATE

    def region(self, k: int) -> np.ndarray:
        return self.counts == k

    @property
    def image(self) -> np.ndarray:
        return self.counts >= 1

    @property
    def full_fiber(self) -> np.ndarray:
        return self.counts == self.degree


def pixel_centers(bbox: Sequence[float], resolution: int) -> np.ndarray:
    x0, y0, x1, y1 = map(float, bbox)
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if not (x1 > x0 and y1 > y0):
        raise ValueError("bbox must be x0,y0,x1,y1 with x1 > x0 and y1 > y0")
    xs = x0 + (np.arange(resolution) + 0.5) * (x1 - x0) / resolution
    ys = y1 - (np.arange(resolution) + 0.5) * (y1 - y0) / resolution
    return xs[None, :] + 1j * ys[:, None]


def classify_raster(
    q: Polynomial,
    D: CircularDomain,
    bbox: Sequence[float],
    resolution: int,
    guard: float = DEFAULT_GUARD,
) -> FiberGrid:
    """Fiber class of every pixel center of the target plane."""
    q = require_monic(q)
    us = pixel_centers(bbox, resolution)
    counts, margins = fiber_counts(q, D, us, guard)
    return FiberGrid(counts, margins, tuple(map(float, bbox)), q.degree)


def classify_preimage(
    q: Polynomial,
    D: CircularDomain,
    bbox: Sequence[float],
    resolution: int,
    guard: float = DEFAULT_GUARD,
) -> FiberGrid:
    """Source-plane raster: pixel ``z`` gets the fiber class of ``q(z)``."""
    q = require_monic(q)
    zs = pixel_centers(bbox, resolution)
    counts, margins = fiber_counts(q, D, evaluate(q, zs), guard)
    return FiberGrid(counts, margins, tuple(map(float, bbox)), q.degree)


PALETTE = {
    0: (255, 255, 255),
    1: (198, 219, 239),
    2: (107, 174, 214),
    3: (33, 113, 181),
    4: (8, 48, 107),
    5: (252, 146, 114),
    6: (222, 45, 38),
    7: (165, 15, 21),
    8: (103, 0, 13),
}
INDETERMINATE_COLOR = (128, 128, 128)


def raster_rgb(grid: FiberGrid) -> np.ndarray:
    rgb = np.empty(grid.counts.shape + (3,), dtype=np.uint8)
    for k in np.unique(grid.counts):
        color = INDETERMINATE_COLOR if k == INDETERMINATE else PALETTE.get(int(k), PALETTE[int(k) % 9])
        rgb[grid.counts == k] = color
    return rgb


def write_ppm(path, grid: FiberGrid) -> None:
    """Binary PPM (P6), one palette color per fiber count, grey when indeterminate."""
    rgb = raster_rgb(grid)
    h, w = rgb.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(rgb.tobytes())


def read_ppm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    # exactly one whitespace byte separates the header from the pixels
    m = re.match(rb"P6\s+(\d+)\s+(\d+)\s+(\d+)\s", data)
    if m is None:
        raise ValueError("not a binary PPM")
    w, h, maxval = (int(g) for g in m.groups())
    if maxval != 255:
        raise ValueError("only 8-bit PPM supported")
    body = data[m.end() : m.end() + w * h * 3]
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3)


def write_svg(path, points, bbox: Sequence[float], size: int = 300, closed: bool = True) -> None:
    """SVG polyline of complex ``points`` in the pixel frame of a raster over ``bbox``."""
    x0, y0, x1, y1 = map(float, bbox)
    pts = np.asarray(points, dtype=np.complex128)
    px = (pts.real - x0) / (x1 - x0) * size
    py = (y1 - pts.imag) / (y1 - y0) * size
    coords = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(px, py))
    tag = "polygon" if closed else "polyline"
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n'
        f'  <{tag} points="{coords}" fill="none" stroke="black" stroke-width="1"/>\n'
        "</svg>\n"
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
