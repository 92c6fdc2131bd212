"""Command line entry point.

Polynomials are given either as a path to a JSON file or inline, in the
form ``{"coeffs": [[re, im], ...], "ambient": n}`` (lowest degree first) or a
bare list of pairs.  Domains are written as

    disk                    open unit disk
    disk:cx,cy,r            open disk
    exterior:cx,cy,r        |z - c| > r
    halfplane:bre,bim,c     2 Re(B z) + c < 0

with an optional ``:closed`` suffix.

Exit status: 0 on success with no violations, 1 if a verifier found
violations, 2 on errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import harness, regions, takagi
from .apolarity import bracket, is_apolar
from .errors import InvalidDomain, QApolarError
from .figures import render_figures
from .polycore import Polynomial, poly_from_json, poly_to_json
from .pullback import t_matrix


def load_poly(text: str) -> Polynomial:
    path = Path(text)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    return poly_from_json(text)


def parse_domain(text: str) -> regions.CircularDomain:
    parts = text.strip().split(":")
    closed = parts[-1] == "closed"
    if closed:
        parts = parts[:-1]
    kind = parts[0]
    nums = [float(x) for x in parts[1].split(",")] if len(parts) > 1 else []
    if kind in ("disk", "unit") and not nums:
        return regions.CircularDomain.unit_disk(closed)
    if kind == "disk" and len(nums) == 3:
        return regions.CircularDomain.disk(complex(nums[0], nums[1]), nums[2], closed)
    if kind == "exterior" and len(nums) == 3:
        return regions.CircularDomain.exterior(complex(nums[0], nums[1]), nums[2], closed)
    if kind == "halfplane" and len(nums) == 3:
        return regions.CircularDomain.halfplane(complex(nums[0], nums[1]), nums[2], closed)
    raise InvalidDomain(f"cannot parse domain {text!r}")


def _bbox(text: str):
    vals = [float(x) for x in text.split(",")]
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("bbox needs x0,y0,x1,y1")
    return tuple(vals)


def _complex(text: str) -> complex:
    vals = [float(x) for x in text.split(",")]
    return complex(vals[0], vals[1] if len(vals) > 1 else 0.0)


def _pairs(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(m)]


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print("\n".join(text_lines))


# subcommands


def cmd_bracket(args) -> int:
    f, g = load_poly(args.f), load_poly(args.g)
    val = bracket(f, g, args.n)
    apolar = is_apolar(f, g, args.n, args.tol)
    _emit(args, {"bracket": [val.real, val.imag], "apolar": apolar},
          [f"[f, g]_{args.n} = {val:.12g}", f"apolar: {apolar}"])
    return 0


def cmd_tqn(args) -> int:
    q = load_poly(args.q)
    m = t_matrix(q, args.n)
    if args.basis == "orthonormal":
        m = m.to_orthonormal()
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            for row in m.entries:
                w.writerow([f"{z.real:.17g}{z.imag:+.17g}j" for z in row])
    lines = [f"T_(q,{args.n}) in {m.basis} basis:"]
    lines += ["  " + "  ".join(f"{z:.6g}" for z in row) for row in m.entries]
    _emit(args, {"basis": m.basis, "n": args.n, "matrix": _pairs(m.entries)}, lines)
    return 0


def cmd_regions(args) -> int:
    q = load_poly(args.q)
    D = parse_domain(args.domain)
    grid = regions.classify_raster(q, D, args.bbox, args.res)
    regions.write_ppm(args.out, grid)
    if args.overlay:
        pts = regions.boundary_samples(q, D, 2048)
        regions.write_svg(args.overlay, pts, args.bbox, size=args.res, closed=D.A != 0.0)
    ks, n = np.unique(grid.counts, return_counts=True)
    counts = {("indeterminate" if k == regions.INDETERMINATE else int(k)): int(c) for k, c in zip(ks, n)}
    _emit(args, {"pixels": counts, "out": args.out},
          [f"wrote {args.out}"] + [f"  k={k}: {c} pixels" for k, c in counts.items()])
    return 0


def cmd_schur_cohn(args) -> int:
    q = load_poly(args.q)
    lam = args.lam
    shifted = q - Polynomial([lam], q.degree) if lam else q
    sc = regions.schur_cohn(shifted)
    pd = regions.is_positive_definite(sc)
    payload = {"lambda": [lam.real, lam.imag], "matrix": _pairs(sc.entries), "positive_definite": pd}
    lines = [f"SC(q - ({lam:.6g})):"] + ["  " + "  ".join(f"{z:.6g}" for z in row) for row in sc.entries]
    lines.append(f"positive definite: {pd}")
    if args.scan:
        res = regions.q_circ_empty_scan(q, args.res)
        if isinstance(res, regions.NonemptyWitness):
            payload["scan"] = {"witness": [res.lam.real, res.lam.imag]}
            lines.append(f"q_o(D) nonempty, witness lambda = {res.lam:.6g}")
        else:
            payload["scan"] = {"empty_up_to_grid": res.resolution}
            lines.append(f"q_o(D) empty up to a {res.resolution}x{res.resolution} grid")
    _emit(args, payload, lines)
    return 0


def cmd_takagi(args) -> int:
    q = load_poly(args.q)
    basis = takagi.skew_eigenbasis(q, args.n)
    rep = takagi.verify_double_orthogonality(q, args.n, basis)
    if args.emit_basis:
        with open(args.emit_basis, "w", encoding="utf-8") as fh:
            json.dump({"singulars": basis.singulars.tolist(),
                       "polys": [poly_to_json(p) for p in basis.polys]}, fh, indent=2)
    payload = {
        "singulars": basis.singulars.tolist(),
        "gram_residual": rep.gram_residual,
        "bracket_residual": rep.bracket_residual,
    }
    lines = ["lambda: " + ", ".join(f"{s:.12g}" for s in basis.singulars),
             f"gram residual: {rep.gram_residual:.3e}",
             f"bracket residual: {rep.bracket_residual:.3e}"]
    _emit(args, payload, lines)
    return 0


def cmd_verify(args) -> int:
    D = parse_domain(args.domain)
    if args.target == "grace":
        rep = harness.verify_grace_classical(args.n, D, args.trials, args.seed)
    elif args.target == "grace-rel":
        rep = harness.verify_grace_relative(load_poly(args.q), args.n, D, args.trials, args.seed)
    elif args.target == "walsh-rel":
        rep = harness.verify_walsh_relative(load_poly(args.q), args.n, D, args.trials, args.seed)
    else:
        rep = harness.verify_bernstein(
            load_poly(args.q), args.n, D, load_poly(args.f), load_poly(args.g), args.trials, args.seed
        )
    lines = [
        f"{args.target}: trials={rep.trials} passes={rep.passes} violations={rep.violations} "
        f"skips={rep.indeterminate_skips} worst_margin={rep.worst_margin:.3e} seed={rep.seed}"
    ]
    _emit(args, rep.to_json(), lines)
    return 0 if rep.ok else 1


def cmd_render(args) -> int:
    out = render_figures(args.out, args.res)
    lines = []
    for fig in out:
        lines.append(f"{fig['name']}: " + ", ".join(fig["files"].values()))
    _emit(args, {"figures": out}, lines)
    return 0


def _global_flags(parser, suppress) -> None:
    parser.add_argument("--seed", type=int, default=suppress or 42)
    parser.add_argument("--tol", type=float, default=suppress or 1e-10, help="apolarity tolerance")
    parser.add_argument("--json", action="store_true", default=suppress or False,
                        help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand; the copies on
    # the subparsers must not overwrite values given before it
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="qapolar", description=__doc__.split("\n")[0])
    _global_flags(p, None)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bracket", parents=[common], help="apolarity bracket of two polynomials")
    s.add_argument("f")
    s.add_argument("g")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("tqn", parents=[common], help="matrix of T_(q,n)")
    s.add_argument("--q", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--basis", choices=["monomial", "orthonormal"], default="monomial")
    s.add_argument("--csv")
    s.set_defaults(func=cmd_tqn)

    s = sub.add_parser("regions", parents=[common], help="fiber-count raster of q over a domain")
    s.add_argument("--q", required=True)
    s.add_argument("--domain", default="disk")
    s.add_argument("--bbox", type=_bbox, default=(-2.0, -2.0, 2.0, 2.0))
    s.add_argument("--res", type=int, default=300)
    s.add_argument("--out", required=True)
    s.add_argument("--overlay")
    s.set_defaults(func=cmd_regions)

    s = sub.add_parser("schur-cohn", parents=[common], help="Schur-Cohn matrix and emptiness scan")
    s.add_argument("--q", required=True)
    s.add_argument("--lambda", dest="lam", type=_complex, default=0j)
    s.add_argument("--scan", action="store_true")
    s.add_argument("--res", type=int, default=40)
    s.set_defaults(func=cmd_schur_cohn)

    s = sub.add_parser("takagi", parents=[common], help="skew eigenbasis of T_(q,n)")
    s.add_argument("--q", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--emit-basis")
    s.set_defaults(func=cmd_takagi)

    s = sub.add_parser("verify", parents=[common], help="randomized theorem certificates")
    s.add_argument("target", choices=["grace", "grace-rel", "walsh-rel", "bernstein"])
    s.add_argument("--q")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--domain", default="disk")
    s.add_argument("--trials", type=int, default=300)
    s.add_argument("--f")
    s.add_argument("--g")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("render-figures", parents=[common], help="write the three reference figures")
    s.add_argument("--out", default="figures")
    s.add_argument("--res", type=int, default=300)
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.target != "grace" and not args.q:
        parser.error(f"verify {args.target} needs --q")
    if args.command == "verify" and args.target == "bernstein" and not (args.f and args.g):
        parser.error("verify bernstein needs --f and --g")
    try:
        return args.func(args)
    except (QApolarError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
