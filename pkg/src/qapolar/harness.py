"""Randomized certificates for the Grace and Walsh theorems and their
relative versions along a polynomial map ``q``.

Every verifier returns a :class:`TrialReport`.  A violation means the
computed configuration contradicts the theorem with margins to spare, so a
nonzero count points at a bug (or at a hypothesis the sampler failed to
enforce) and comes with a full dump of the trial.

Random numbers come from :class:`SplitMix64` so reports reproduce bit for bit
from the seed alone, in any language that implements the same 20 lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .apolarity import fischer_norm
from .errors import EmptyRegion, HypothesisFailed, NonConvergence
from .polycore import Polynomial, binom_row, compose, evaluate, poly_to_json, roots
from .pullback import reflected, require_monic, s_eval, t_matrix
from .regions import (
    INDETERMINATE,
    CircularDomain,
    EmptyUpToGrid,
    fiber_counts,
    q_circ_empty_scan,
)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
TRIAL_STRIDE = 0xD1B54A32D192ED03

SAMPLE_MARGIN = 1e-6
MAX_REJECTIONS = 10_000
COEFF_RADIUS = 2.0
ROOT_GUARD = 1e-9
WALSH_RTOL = 1e-12
BERNSTEIN_SLACK = 1e-9
_BATCH = 64


class SplitMix64:
    """SplitMix64 generator.

    State update and output, all arithmetic mod 2**64::

        state += 0x9E3779B97F4A7C15
        z = state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    ``uniform()`` is ``(next >> 11) * 2**-53``.  The generator of trial ``i``
    under seed ``s`` is seeded with the first output of
    ``SplitMix64((s ^ (i * 0xD1B54A32D192ED03)) mod 2**64)``.
    """

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    @classmethod
    def for_trial(cls, seed: int, index: int) -> "SplitMix64":
        mixed = (int(seed) ^ (int(index) * TRIAL_STRIDE)) & MASK64
        return cls(cls(mixed).next_u64())

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def uniforms(self, size: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(size)])

    def in_disk(self, radius: float = 1.0, center: complex = 0.0) -> complex:
        r = radius * np.sqrt(self.uniform())
        t = 2.0 * np.pi * self.uniform()
        return complex(center + r * np.exp(1j * t))

    def in_square(self, size: int, half: float, center: complex = 0.0) -> np.ndarray:
        u = self.uniforms(2 * size).reshape(size, 2)
        return center + half * ((2 * u[:, 0] - 1) + 1j * (2 * u[:, 1] - 1))


@dataclass
class TrialReport:
    trials: int
    violations: int
    indeterminate_skips: int
    worst_margin: float
    seed: int
    passes: int = 0
    dumps: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def merge(self, other: "TrialReport") -> "TrialReport":
        details = dict(self.details)
        for k, v in other.details.items():
            if k.startswith("worst") and k in details:
                details[k] = max(details[k], v)
            elif isinstance(v, (int, float)):
                details[k] = details.get(k, 0) + v
            else:
                details[k] = v
        return TrialReport(
            self.trials + other.trials,
            self.violations + other.violations,
            self.indeterminate_skips + other.indeterminate_skips,
            float(np.fmin(self.worst_margin, other.worst_margin)),
            self.seed,
            self.passes + other.passes,
            self.dumps + other.dumps,
            details,
        )

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "violations": self.violations,
            "passes": self.passes,
            "indeterminate_skips": self.indeterminate_skips,
            "worst_margin": self.worst_margin,
            "seed": self.seed,
            "details": self.details,
            "dumps": self.dumps,
        }


class _Tally:
    """Accumulates per-trial outcomes into a report."""

    def __init__(self, seed: int):
        self.seed = seed
        self.trials = self.violations = self.passes = self.skips = 0
        self.worst = np.inf
        self.dumps: list = []
        self.details: dict = {}

    def skip(self, reason: str) -> None:
        self.trials += 1
        self.skips += 1
        self.details[reason] = self.details.get(reason, 0) + 1

    def passed(self, margin: float) -> None:
        self.trials += 1
        self.passes += 1
        self.worst = min(self.worst, float(margin))

    def violated(self, dump: dict) -> None:
        self.trials += 1
        self.violations += 1
        self.dumps.append(dump)

    def report(self) -> TrialReport:
        worst = float(self.worst) if np.isfinite(self.worst) else float("nan")
        return TrialReport(
            self.trials, self.violations, self.skips, worst, self.seed, self.passes, self.dumps, self.details
        )


# sampling


class _SamplingFailed(Exception):
    pass


def _source_window(D: CircularDomain) -> tuple[complex, float]:
    """Disk (center, radius) in the source plane that sees the interesting part of ``D``."""
    if D.A > 0:
        return D.center, D.radius
    if D.A < 0:
        return D.center, 3.0 * D.radius
    foot = -D.C * np.conj(D.B) / (2.0 * abs(D.B) ** 2)
    return complex(foot), 3.0 * (1.0 + abs(foot))


def _target_box(q: Polynomial, D: CircularDomain) -> tuple[complex, float]:
    """Square (center, half-width) around ``q(0)``, twice the size of the window image."""
    c, r = _source_window(D)
    rho = abs(c) + r
    coeffs = np.abs(q.coeffs)
    half = float(np.sum(coeffs[1:] * rho ** np.arange(1, coeffs.size))) + 1e-12
    center = complex(q.coeffs[0])
    return center, 2.0 * half


def sample_in_domain(rng: SplitMix64, D: CircularDomain, margin: float = SAMPLE_MARGIN) -> complex:
    c, r = _source_window(D)
    for _ in range(MAX_REJECTIONS // _BATCH + 1):
        zs = rng.in_square(_BATCH, r, c)
        good = D.contains(zs) & (D.boundary_distance(zs) > margin)
        if good.any():
            return complex(zs[np.argmax(good)])
    raise _SamplingFailed("no interior point found")


def sample_fiber_region(
    rng: SplitMix64, q: Polynomial, D: CircularDomain, want: int, margin: float = SAMPLE_MARGIN
) -> complex:
    """Point ``u`` whose fiber has exactly ``want`` points in ``D``, each root
    at distance > ``margin`` from the boundary.  ``want = d`` samples
    ``q_o(D)``; ``want = 0`` samples the complement of ``q(D)``.

    For ``want >= 1`` proposals are images ``q(z)`` of source points ``z`` in
    ``D``, which always land in ``q(D)``; otherwise they are uniform in a
    square around ``q(0)`` covering the image of the source window.
    """
    if want >= 1:
        c, r = _source_window(D)
    else:
        center, half = _target_box(q, D)
    drawn = 0
    while drawn < MAX_REJECTIONS:
        if want >= 1:
            zs = rng.in_square(_BATCH, r, c)
            us = evaluate(q, zs[D.contains(zs)])
        else:
            us = rng.in_square(_BATCH, half, center)
        drawn += _BATCH
        if us.size == 0:
            continue
        counts, margins = fiber_counts(q, D, us)
        good = (counts == want) & (margins > margin)
        if good.any():
            return complex(us[np.argmax(good)])
    raise _SamplingFailed(f"no point with fiber count {want} after {drawn} draws")


def _random_coeffs(rng: SplitMix64, size: int) -> np.ndarray:
    return np.array([rng.in_disk(COEFF_RADIUS) for _ in range(size)])


def apolar_partner(rng: SplitMix64, h: Polynomial, n: int) -> Polynomial | None:
    """Random monic ``g`` of degree ``n`` with ``[h, g]_n = 0``; ``None`` if degenerate."""
    hc = h.with_ambient(n).coeffs
    j = np.arange(n + 1)
    # [h, g]_n = sum_j w_j g_j
    w = (-1.0) ** (n - j) * hc[n - j] / binom_row(n)[n - j]
    p = int(np.argmax(np.abs(w)))
    if abs(w[p]) == 0:
        return None
    g = _random_coeffs(rng, n + 1)
    g[p] = 0.0
    g[p] = -np.dot(w, g) / w[p]
    if abs(g[n]) <= 1e-8 * np.max(np.abs(g)):
        return None
    g = g / g[n]
    g[n] = 1.0
    return Polynomial(g, n)


def _root_status(D: CircularDomain, z: np.ndarray):
    """(inside, near-boundary) masks for points ``z``."""
    vals = D.form(z)
    near = np.abs(vals) <= ROOT_GUARD * D.form_scale(z)
    inside = (vals < 0 if D.strict else vals <= 0) & ~near
    return inside, near


def _dump(**kw) -> dict:
    out = {}
    for k, v in kw.items():
        if isinstance(v, Polynomial):
            out[k] = poly_to_json(v)
        elif isinstance(v, np.ndarray):
            out[k] = [[float(np.real(x)), float(np.imag(x))] for x in v.ravel()] if np.iscomplexobj(v) else v.tolist()
        elif isinstance(v, complex):
            out[k] = [v.real, v.imag]
        else:
            out[k] = v
    return out


def _domain_json(D: CircularDomain) -> dict:
    return {"A": D.A, "B": [D.B.real, D.B.imag], "C": D.C, "strict": D.strict}


# classical Grace


def verify_grace_classical(n: int, D: CircularDomain, trials: int, seed: int) -> TrialReport:
    """Apolar ``f, g`` of degree ``n`` with all roots of ``f`` in ``D``: ``g`` must have a root in ``D``.

    ``worst_margin`` is the smallest, over passing trials, distance from the
    boundary of the deepest root of ``g`` inside ``D``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    tally = _Tally(seed)
    for i in range(trials):
        rng = SplitMix64.for_trial(seed, i)
        try:
            f = Polynomial.from_roots([sample_in_domain(rng, D) for _ in range(n)])
        except _SamplingFailed:
            tally.skip("sampling")
            continue
        g = apolar_partner(rng, f, n)
        if g is None:
            tally.skip("degenerate")
            continue
        try:
            rg = roots(g).roots
        except NonConvergence:
            tally.skip("nonconvergence")
            continue
        inside, near = _root_status(D, rg)
        if inside.any():
            tally.passed(np.max(D.boundary_distance(rg[inside])))
        elif near.any():
            tally.skip("indeterminate")
        else:
            tally.violated(_dump(trial=i, domain=_domain_json(D), f=f, g=g, roots_g=rg))
    return tally.report()


# relative versions


def _require_nonempty_q_circ(q: Polynomial, D: CircularDomain, seed: int) -> None:
    if D.is_unit_disk():
        if isinstance(q_circ_empty_scan(q), EmptyUpToGrid):
            raise EmptyRegion("q_o(D) is empty at scan resolution")
        return
    try:
        sample_fiber_region(SplitMix64(seed), q, D, q.degree)
    except _SamplingFailed as exc:
        raise EmptyRegion(f"no sample point of q_o(D): {exc}") from exc


def verify_grace_relative(q: Polynomial, n: int, D: CircularDomain, trials: int, seed: int) -> TrialReport:
    """Roots of ``f`` in ``q_o(D)``, ``[T f, g]_n = 0``: some root of ``g`` must lie in ``q(D)``.

    ``worst_margin`` is the smallest, over passing trials, boundary margin of
    the best fiber certifying a root of ``g`` in ``q(D)``.
    """
    q = require_monic(q)
    _require_nonempty_q_circ(q, D, seed)
    d = q.degree
    T = t_matrix(q, n).entries
    tally = _Tally(seed)
    for i in range(trials):
        rng = SplitMix64.for_trial(seed, i)
        try:
            f = Polynomial.from_roots([sample_fiber_region(rng, q, D, d) for _ in range(n)])
        except _SamplingFailed:
            tally.skip("sampling")
            continue
        tf = Polynomial(T @ f.coeffs, n)
        g = apolar_partner(rng, tf, n)
        if g is None:
            tally.skip("degenerate")
            continue
        try:
            rg = roots(g).roots
        except NonConvergence:
            tally.skip("nonconvergence")
            continue
        counts, margins = fiber_counts(q, D, rg)
        hit = counts >= 1
        if hit.any():
            tally.passed(np.max(margins[hit]))
        elif (counts == INDETERMINATE).any():
            tally.skip("indeterminate")
        else:
            tally.violated(
                _dump(trial=i, domain=_domain_json(D), q=q, f=f, g=g, roots_g=rg, fiber_counts=counts)
            )
    return tally.report()


def s_scale(q: Polynomial, n: int, f: Polynomial, u) -> float:
    """Cauchy-Schwarz bound ``||f o q|| * ||prod (q - u_j)^{#v}||`` for ``|S_{q,n}(f)(u)|``."""
    d = q.degree
    kernel = Polynomial([1.0], 0)
    for uj in u:
        kernel = kernel * reflected(q - Polynomial([uj], d))
    return fischer_norm(compose(f, q), n * d) * fischer_norm(kernel, n * d)


def verify_walsh_relative(q: Polynomial, n: int, D: CircularDomain, trials: int, seed: int) -> TrialReport:
    """``f`` of degree ``n`` without zeros in ``q(D)``: ``S_{q,n}(f)`` must not vanish on
    ``q_o(D)^n`` and ``T f`` must not vanish on ``q_o(D)``.

    ``worst_margin`` is the smallest observed ``|S(f)(u)| / scale``.
    """
    q = require_monic(q)
    _require_nonempty_q_circ(q, D, seed)
    d = q.degree
    T = t_matrix(q, n).entries
    tally = _Tally(seed)
    for i in range(trials):
        rng = SplitMix64.for_trial(seed, i)
        try:
            f = Polynomial.from_roots([sample_fiber_region(rng, q, D, 0) for _ in range(n)])
            u = [sample_fiber_region(rng, q, D, d) for _ in range(n)]
        except _SamplingFailed:
            tally.skip("sampling")
            continue
        s = s_eval(q, n, f, u)
        rel = abs(s) / s_scale(q, n, f, u)
        tf = Polynomial(T @ f.coeffs, n)
        try:
            rt = roots(tf).roots
        except NonConvergence:
            tally.skip("nonconvergence")
            continue
        counts, _ = fiber_counts(q, D, rt)
        if rel <= WALSH_RTOL or (counts == d).any():
            tally.violated(
                _dump(
                    trial=i, domain=_domain_json(D), q=q, f=f, u=np.array(u), s_value=complex(s),
                    relative=rel, roots_tf=rt, fiber_counts_tf=counts,
                )
            )
        else:
            tally.passed(rel)
    return tally.report()


# Bernstein-type inequality


def _dense_image(q: Polynomial, D: CircularDomain, radial: int = 48, angular: int = 96) -> np.ndarray:
    """Points of ``q(D)`` from a polar grid of the source window, plus the boundary."""
    c, r = _source_window(D)
    if D.A < 0:
        rad = D.radius * np.geomspace(1.0 + 1e-9, 1e3, radial)
        c = D.center
    else:
        rad = r * np.linspace(0.0, 1.0, radial) ** 0.5
    th = 2 * np.pi * np.arange(angular) / angular
    zs = (c + rad[:, None] * np.exp(1j * th)[None, :]).ravel()
    zs = zs[D.contains(zs) | (D.boundary_distance(zs) < 1e-12)]
    return np.asarray(evaluate(q, zs))


def check_bernstein_hypothesis(q: Polynomial, D: CircularDomain, f: Polynomial, g: Polynomial) -> None:
    """Raise :class:`HypothesisFailed` unless ``|f| >= |g|`` on a dense sample of
    ``q(D)`` and ``f, g`` share no zero in ``q(D)``."""
    q = require_monic(q)
    if f.is_zero:
        raise HypothesisFailed("f is zero")
    if f.degree >= 1:
        rf = roots(f).roots
        counts, _ = fiber_counts(q, D, rf)
        in_image = counts >= 1
        if in_image.any():
            gvals = np.abs(evaluate(g, rf[in_image]))
            if np.any(gvals <= 1e-9 * max(1.0, np.max(np.abs(g.coeffs)))):
                raise HypothesisFailed("f and g have a common zero in q(D)")
            raise HypothesisFailed(f"f vanishes at {rf[in_image][0]:.6g} in q(D) where g does not")
    w = _dense_image(q, D)
    fw, gw = np.abs(evaluate(f, w)), np.abs(evaluate(g, w))
    bad = fw < gw * (1.0 - BERNSTEIN_SLACK)
    if bad.any():
        k = int(np.argmax(bad))
        raise HypothesisFailed(f"|f/g| < 1 at u={w[k]:.6g} in q(D)")


def bernstein_witness(q: Polynomial, D: CircularDomain, f: Polynomial, g: Polynomial, ratio: complex):
    """Some ``z`` in ``q(D)`` with ``f(z)/g(z) = ratio``, among the roots of ``f - ratio*g``.

    Returns ``(z, gap)`` with ``gap = |f(z)/g(z) - ratio| / max(1, |ratio|)``,
    or ``(None, inf)`` when no such root is in ``q(D)``.
    """
    n = max(f.ambient, g.ambient)
    h = f.with_ambient(n) - g.with_ambient(n) * ratio
    scale = np.max(np.abs(f.coeffs)) + abs(ratio) * np.max(np.abs(g.coeffs))
    if np.max(np.abs(h.coeffs)) <= 1e-12 * scale:
        # f = ratio * g: any point of q(D) off the zeros of g will do
        w = _dense_image(q, D, 8, 16)
        w = w[np.abs(evaluate(g, w)) > 0]
        return (complex(w[0]), 0.0) if w.size else (None, np.inf)
    if h.degree < 1:
        return None, np.inf
    rz = roots(h).roots
    counts, _ = fiber_counts(q, D, rz)
    best, gap = None, np.inf
    for z, c in zip(rz, counts):
        if c == 0:
            continue
        gz = complex(evaluate(g, z))
        if gz == 0:
            continue
        e = abs(complex(evaluate(f, z)) / gz - ratio) / max(1.0, abs(ratio))
        if e < gap:
            best, gap = complex(z), e
    return best, gap


def verify_bernstein(
    q: Polynomial,
    n: int,
    D: CircularDomain,
    f: Polynomial,
    g: Polynomial,
    samples: int,
    seed: int,
    witness_tol: float = 1e-3,
) -> TrialReport:
    """``|S(f)/S(g)| >= 1`` on ``q_o(D)^n`` given ``|f/g| >= 1`` on ``q(D)``.

    Each sample also looks for a point of ``q(D)`` where ``f/g`` takes the
    sampled value of ``S(f)/S(g)``.  ``worst_margin`` is the smallest
    observed ``|S(f)/S(g)| - 1``.
    """
    q = require_monic(q)
    check_bernstein_hypothesis(q, D, f, g)
    _require_nonempty_q_circ(q, D, seed)
    d = q.degree
    tally = _Tally(seed)
    worst_gap = 0.0
    for i in range(samples):
        rng = SplitMix64.for_trial(seed, i)
        try:
            y = [sample_fiber_region(rng, q, D, d) for _ in range(n)]
        except _SamplingFailed:
            tally.skip("sampling")
            continue
        sf, sg = s_eval(q, n, f, y), s_eval(q, n, g, y)
        if abs(sg) <= 1e-12 * s_scale(q, n, g, y):
            tally.skip("s_g_zero")
            continue
        ratio = sf / sg
        _, gap = bernstein_witness(q, D, f, g, ratio)
        worst_gap = max(worst_gap, gap)
        if abs(ratio) < 1.0 - BERNSTEIN_SLACK or gap > witness_tol:
            tally.violated(_dump(trial=i, domain=_domain_json(D), q=q, f=f, g=g, y=np.array(y),
                                 ratio=complex(ratio), witness_gap=gap))
        else:
            tally.passed(abs(ratio) - 1.0)
    rep = tally.report()
    rep.details["worst_witness_gap"] = worst_gap
    return rep
