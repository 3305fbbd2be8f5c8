"""Command-line frontend.

Subcommands: trace, tree, verify, crofton, levelset, blaschke, explore.
Exit codes: 0 success, 1 a verification check failed, 2 usage/input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import geometry
from .blaschke import BlaschkeProduct, blaschke_tree_and_bounds
from .crofton import crofton_length, max_crossings, verify_length_bounds
from .errors import PolydescentError
from .explore import InstanceSpec, explore_lengths, rows_to_csv, summarize
from .levelset import count_level_components, build_level_grid
from .poly import FactoredPolynomial, critical_points
from .targets import PolynomialTarget
from .tracer import DescentPath, trace_descent
from .tree import build_descent_tree, to_dot, verify_tree


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_text(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _load_poly(path: str) -> FactoredPolynomial:
    return FactoredPolynomial.from_file(path)


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ValueError(f"cannot parse complex number from {text!r}") from exc


def _cmd_trace(args) -> int:
    poly = _load_poly(args.poly)
    target = PolynomialTarget(poly)
    beta = _parse_complex(getattr(args, "from"))
    path = trace_descent(target, beta)
    _write(args.out, _json_text(path.to_json_dict()))
    return 0


def _tree_outputs(tree, report, target, args) -> None:
    if args.dot:
        _write(args.dot, to_dot(tree))
    if args.json:
        _write(args.json, _json_text(tree.to_json_dict()))
    if args.svg:
        from .render import render_tree_svg

        hull = geometry.convex_hull([complex(v.location) for v in tree.vertices if v.kind == "root"])
        value_fn = None
        if args.phase:
            locs = target.locations
            mults = target.multiplicities

            def value_fn(zs):
                zs = np.asarray(zs, dtype=np.complex128)
                if target.kind == 0:
                    return np.prod(
                        (zs[..., None] - locs) ** mults, axis=-1
                    )
                num = np.prod(
                    ((zs[..., None] - locs) / (1 - np.conj(locs) * zs[..., None]))
                    ** mults,
                    axis=-1,
                )
                return target.constant * num

        _write(
            args.svg,
            render_tree_svg(
                tree, hull, value_fn=value_fn, phase_background=args.phase
            ),
        )
    if args.report:
        _write(args.report, _json_text(report.to_json_dict()))


def _cmd_tree(args) -> int:
    poly = _load_poly(args.poly)
    target = PolynomialTarget(poly)
    tree = build_descent_tree(target)
    report = verify_tree(tree)
    _tree_outputs(tree, report, target, args)
    return 0 if report.passed else 1


def _cmd_verify(args) -> int:
    poly = _load_poly(args.poly)
    target = PolynomialTarget(poly)
    hull = geometry.convex_hull([complex(a) for a in poly.locations])
    disk = target.disk
    tree = build_descent_tree(target)
    tree_report = verify_tree(tree)
    edge_reports = []
    all_ok = tree_report.passed
    for e in tree.edges:
        rep = verify_length_bounds(
            e.path, poly, hull, disk, n_theta=args.n_theta
        )
        edge_ok = rep.length_le_pi_n_r and rep.crossings_le_degree
        if rep.boundary_endpoint:
            edge_ok = edge_ok and rep.length_le_two_pi_s_r and rep.crossings_le_two_s
        crofton_ok = (
            abs(rep.crofton_length - rep.arc_length) <= 5e-3 * max(rep.arc_length, 1e-12)
        )
        all_ok = all_ok and edge_ok and crofton_ok
        d = rep.to_json_dict()
        d["source"] = e.source
        d["target"] = e.target
        d["crofton_consistent"] = crofton_ok
        edge_reports.append(d)
    report = {
        "polynomial": poly.to_json_dict(),
        "degree": poly.degree,
        "distinct_roots": poly.s,
        "disk": {
            "center": {"re": disk.center.real, "im": disk.center.imag},
            "radius": disk.radius,
        },
        "hull_vertices": [
            {"re": v.real, "im": v.imag} for v in hull.vertices
        ],
        "critical_points": [
            {"re": loc.real, "im": loc.imag, "mult": int(m)}
            for loc, m in target.criticals.points
        ],
        "tree": tree_report.to_json_dict(),
        "edges": edge_reports,
        "all_passed": all_ok,
    }
    _write(args.report, _json_text(report))
    return 0 if all_ok else 1


def _cmd_crofton(args) -> int:
    with open(args.path, encoding="utf-8") as fh:
        path = DescentPath.from_json_dict(json.load(fh))
    poly = _load_poly(args.poly)
    disk = geometry.smallest_enclosing_disk([complex(a) for a in poly.locations])
    est = crofton_length(path, args.n_theta)
    profile = max_crossings(path, args.n_theta // 4 or 4, args.n_r)
    out = {
        "arc_length": path.arc_length,
        "crofton": est.length,
        "pi_N_R": float(np.pi) * poly.degree * disk.radius,
        "two_pi_s_R": 2.0 * float(np.pi) * poly.s * disk.radius,
        "max_crossings": profile.max_count,
    }
    _write(args.out, _json_text(out))
    return 0


def _cmd_levelset(args) -> int:
    poly = _load_poly(args.poly)
    criticals = critical_points(poly)
    report = count_level_components(
        poly, args.r, resolution=args.grid, criticals=criticals
    )
    _write(args.out, _json_text(report.to_json_dict()))
    if args.svg:
        from .render import render_levelset_svg

        grid = build_level_grid(poly, args.r, args.grid)
        _write(
            args.svg,
            render_levelset_svg(grid, [complex(a) for a in poly.locations]),
        )
    return 0 if report.agrees else 1


def _cmd_blaschke(args) -> int:
    product = BlaschkeProduct.from_file(args.blaschke)
    tree, report = blaschke_tree_and_bounds(product)
    from .blaschke import BlaschkeTarget

    target = BlaschkeTarget(product)
    _tree_outputs(tree, report, target, args)
    return 0 if report.passed else 1


def _cmd_explore(args) -> int:
    spec = InstanceSpec(
        kind=args.kind,
        seed=args.seed,
        max_s=args.max_s,
        max_mult=args.max_mult,
        max_degree=args.max_degree,
        region_radius=0.8 if args.kind == "blaschke" else 1.0,
        bias_interior_multiplicity=args.kind == "polynomial",
    )
    rows = explore_lengths(spec, args.instances, threads=args.threads)
    _write(args.csv, rows_to_csv(rows))
    summary = summarize(rows)
    _write(args.summary, _json_text(summary))
    ok = (
        summary["failed"] == 0
        and summary["max_ratio_pi_N_R"] <= 1.0 + 1e-3
        and summary["max_ratio_two_pi_s_R_boundary"] <= 1.0 + 1e-3
    )
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polydescent",
        description=(
            "Trace steepest-descent paths of |f| for factored polynomials "
            "and Blaschke products, build their descent trees, and check "
            "length and component-count bounds."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="trace one descent path from a point")
    p.add_argument("--poly", required=True, help="polynomial JSON file")
    p.add_argument("--from", required=True, help="anchor, e.g. '0.5+0.25j'")
    p.add_argument("--out", default="-", help="path JSON output (default stdout)")
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("tree", help="build and verify the descent tree")
    p.add_argument("--poly", required=True)
    p.add_argument("--dot", help="write Graphviz DOT")
    p.add_argument("--json", help="write tree JSON")
    p.add_argument("--svg", help="write SVG rendering")
    p.add_argument("--report", help="write verification report JSON")
    p.add_argument("--phase", action="store_true", help="phase-colored background")
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("verify", help="full tree + bounds verification report")
    p.add_argument("--poly", required=True)
    p.add_argument("--report", required=True, help="report JSON file")
    p.add_argument("--n-theta", type=int, default=720)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("crofton", help="length estimate for a stored path")
    p.add_argument("--path", required=True, help="path JSON file")
    p.add_argument("--poly", required=True)
    p.add_argument("--n-theta", type=int, default=720)
    p.add_argument("--n-r", type=int, default=64)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_crofton)

    p = sub.add_parser("levelset", help="sublevel component count vs prediction")
    p.add_argument("--poly", required=True)
    p.add_argument("--r", type=float, required=True, help="threshold |f| < r")
    p.add_argument("--grid", type=int, default=512, help="resolution per axis")
    p.add_argument("--out", default="-")
    p.add_argument("--svg", help="write component-colored SVG")
    p.set_defaults(func=_cmd_levelset)

    p = sub.add_parser("blaschke", help="Blaschke-product commands")
    bsub = p.add_subparsers(dest="blaschke_command", required=True)
    bt = bsub.add_parser("tree", help="descent tree of a Blaschke product")
    bt.add_argument("--blaschke", required=True, help="Blaschke JSON file")
    bt.add_argument("--dot")
    bt.add_argument("--json")
    bt.add_argument("--svg")
    bt.add_argument("--report")
    bt.add_argument("--phase", action="store_true")
    bt.set_defaults(func=_cmd_blaschke)

    p = sub.add_parser("explore", help="random corpus length-ratio exploration")
    p.add_argument("--instances", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--kind", choices=("polynomial", "blaschke"), default="polynomial")
    p.add_argument("--max-s", type=int, default=6)
    p.add_argument("--max-mult", type=int, default=4)
    p.add_argument("--max-degree", type=int, default=12)
    p.add_argument("--csv", default="-", help="CSV output")
    p.add_argument("--summary", default="-", help="summary JSON output")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=_cmd_explore)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except PolydescentError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
