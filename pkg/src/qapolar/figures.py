"""The three reference pictures of ``q_o(D)`` for the unit disk.

Each figure is a target-plane raster of fiber counts, a source-plane raster
(pixel ``z`` colored by the fiber class of ``q(z)``) and an SVG of the curve
``q(|z| = 1)`` drawn in the target raster's frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .polycore import Polynomial
from .regions import (
    CircularDomain,
    boundary_samples,
    classify_preimage,
    classify_raster,
    write_ppm,
    write_svg,
)


@dataclass(frozen=True)
class FigureSpec:
    name: str
    q: Polynomial
    target_bbox: tuple[float, float, float, float]
    source_bbox: tuple[float, float, float, float]


FIGURES = (
    FigureSpec("quadratic", Polynomial([0, 0.5, 1]), (-1.5, -1.75, 2.0, 1.75), (-1.5, -1.5, 1.5, 1.5)),
    FigureSpec("cubic", Polynomial([0, 0.5, 0, 1]), (-2.0, -2.0, 2.0, 2.0), (-1.5, -1.5, 1.5, 1.5)),
    FigureSpec("cubic_empty", Polynomial([0, 1, 0, 1]), (-2.5, -2.5, 2.5, 2.5), (-1.5, -1.5, 1.5, 1.5)),
)


def render_figure(spec: FigureSpec, outdir, resolution: int = 300, curve_samples: int = 2048) -> dict:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    D = CircularDomain.unit_disk()
    image = classify_raster(spec.q, D, spec.target_bbox, resolution)
    pre = classify_preimage(spec.q, D, spec.source_bbox, resolution)
    paths = {
        "image": outdir / f"{spec.name}_image.ppm",
        "preimage": outdir / f"{spec.name}_preimage.ppm",
        "overlay": outdir / f"{spec.name}_curve.svg",
    }
    write_ppm(paths["image"], image)
    write_ppm(paths["preimage"], pre)
    write_svg(paths["overlay"], boundary_samples(spec.q, D, curve_samples), spec.target_bbox, size=resolution)
    ks, n = np.unique(image.counts, return_counts=True)
    return {
        "name": spec.name,
        "files": {k: str(v) for k, v in paths.items()},
        "pixel_counts": {int(k): int(c) for k, c in zip(ks, n)},
    }


def render_figures(outdir, resolution: int = 300) -> list[dict]:
    return [render_figure(spec, outdir, resolution) for spec in FIGURES]
