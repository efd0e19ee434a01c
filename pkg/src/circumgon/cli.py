"""Command-line front end: ``circumgon {solve,gini,regular,oracle,farris}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Sequence

from .config import DEFAULT, Config
from .geom import ConvexPolygon, GeometryError, Point, UnboundedError, ValidationError, external_triangle
from .gini import LorenzError, farris_example, gini_bounds, parse_lorenz
from .oracle import LimitExceeded, brute_force_max, regular_closed_form, regular_ngon
from .solver import solve_max_area

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_UNBOUNDED = 3
EXIT_LIMIT = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> float:
    """Round to 12 significant digits; JSON then prints the shortest repr."""
    y = float(f"{x:.12g}")
    return 0.0 if y == 0.0 else y


def _clean(obj):
    if isinstance(obj, float):
        return fmt(obj)
    if isinstance(obj, Point):
        return [fmt(obj.x), fmt(obj.y)]
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj))


# --- SVG -------------------------------------------------------------------

def _path_data(polylines: Sequence[Sequence[Point]], closed: bool) -> str:
    parts = []
    for pts in polylines:
        if not pts:
            continue
        d = "M " + " L ".join(f"{fmt(p.x)} {fmt(-p.y)}" for p in pts)
        parts.append(d + (" Z" if closed else ""))
    return " ".join(parts)


def write_svg(path: str | Path, layers: Sequence[tuple[str, Sequence[Sequence[Point]], bool, str]]) -> None:
    """Write one ``<g>`` per layer, each holding exactly one ``<path>``.

    ``layers`` entries are (name, polylines, closed, stroke colour).  The y
    axis is flipped so the picture has the usual orientation.
    """
    pts = [p for _, lines, _, _ in layers for line in lines for p in line]
    xs = [p.x for p in pts] or [0.0]
    ys = [-p.y for p in pts] or [0.0]
    pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    box = (min(xs) - pad, min(ys) - pad, max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad)
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                     viewBox=" ".join(str(fmt(v)) for v in box), width="600", height="600")
    stroke = str(fmt(box[2] / 300))
    for name, lines, closed, colour in layers:
        g = ET.SubElement(svg, "g", id=name)
        ET.SubElement(g, "path", d=_path_data(lines, closed), fill="none", stroke=colour,
                      **{"stroke-width": stroke})
    ET.ElementTree(svg).write(path, encoding="utf-8", xml_declaration=True)


# --- commands --------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_VALIDATION) from None


def _load_polygon(path: str, config: Config) -> ConvexPolygon:
    try:
        return ConvexPolygon.from_json(_read(path), config.eps_geom)
    except (ValueError, GeometryError) as exc:
        raise CliError(f"invalid polygon: {exc}", EXIT_VALIDATION) from None


def cmd_solve(args, config: Config) -> int:
    P = _load_polygon(args.input, config)
    sol = solve_max_area(P, config, all_optima=args.all_optima)
    out = sol.to_dict()
    if sol.family is not None:
        out["family_region"] = list(sol.family.vertices)
    print(dumps(out))
    if args.svg:
        triangles = [external_triangle(P, i) for i in range(P.n)]
        write_svg(args.svg, [
            ("P", [P.vertices], True, "black"),
            ("Q", [sol.polygon.vertices], True, "crimson"),
            ("external-triangles", [(t.start, t.end, t.apex) for t in triangles if t.bounded], True, "gray"),
        ])
    return EXIT_OK


def cmd_gini(args, config: Config) -> int:
    try:
        data = parse_lorenz(_read(args.input), args.add_endpoints, config.eps_geom)
    except LorenzError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    bounds = gini_bounds(data, config)
    print(dumps(bounds.to_dict()))
    if args.svg:
        write_svg(args.svg, [
            ("square", [(Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1))], True, "lightgray"),
            ("neutral", [(Point(0, 0), Point(1, 1))], False, "gray"),
            ("polyline", [bounds.lower_chain], False, "black"),
            ("upper-chain", [bounds.upper_chain], False, "crimson"),
        ])
    return EXIT_OK


def cmd_regular(args, config: Config) -> int:
    if args.n < 5:
        raise CliError("--n must be at least 5", EXIT_VALIDATION)
    area, pattern = regular_closed_form(args.n)
    out = {"n": args.n, "closed_form": area, "pattern": pattern}
    if args.compare:
        sol = solve_max_area(regular_ngon(args.n), config)
        out.update(dp=sol.area, un_sequence=sol.un_sequence, diff=abs(sol.area - area))
    print(dumps(out))
    return EXIT_OK


def cmd_oracle(args, config: Config) -> int:
    P = _load_polygon(args.input, config)
    try:
        res = brute_force_max(P, args.limit, config)
    except LimitExceeded as exc:
        raise CliError(str(exc), EXIT_LIMIT) from None
    table = [{"mask": r.mask, "area": r.area} for r in res.table]
    print(dumps({"max": res.area, "mask": res.mask, "table": table}))
    return EXIT_OK


def cmd_farris(args, config: Config) -> int:
    try:
        data = farris_example(args.n)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    # full precision so the CSV reproduces the example exactly
    sys.stdout.write(data.to_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="circumgon",
                                     description="Maximum-area circumscribed polygons and Gini bounds.")
    parser.add_argument("--eps", type=float, help="geometric tolerance (also CIRCUMGON_EPS)")
    parser.add_argument("--eps-angle", type=float, help="angle tolerance for input validation")
    parser.add_argument("--tie-tol", type=float, help="relative tolerance for equal areas")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="maximum-area circumscribed polygon of a polygon JSON file")
    p.add_argument("input")
    p.add_argument("--all-optima", action="store_true", help="list every optimal UN pattern")
    p.add_argument("--svg", help="write P, Q and the external triangles as SVG")
    p.add_argument("--json", action="store_true", help="JSON output (the default)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gini", help="Gini bounds from a Lorenz CSV file")
    p.add_argument("input")
    p.add_argument("--add-endpoints", action="store_true", help="add (0,0) and (1,1) if missing")
    p.add_argument("--svg", help="write the polyline, upper chain and neutral line as SVG")
    p.set_defaults(func=cmd_gini)

    p = sub.add_parser("regular", help="closed-form optimum for the regular n-gon")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--compare", action="store_true", help="also run the solver")
    p.set_defaults(func=cmd_regular)

    p = sub.add_parser("oracle", help="exhaustive pattern table for a polygon JSON file")
    p.add_argument("input")
    p.add_argument("--limit", type=int, default=None, help="maximum number of optional sides")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("farris", help="print the Farris counterexample as CSV")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_farris)
    return parser


def make_config(args) -> Config:
    overrides = {}
    env = os.environ.get("CIRCUMGON_EPS")
    if env:
        try:
            overrides["eps_geom"] = float(env)
        except ValueError:
            raise CliError(f"CIRCUMGON_EPS is not a number: {env!r}", EXIT_VALIDATION) from None
    if args.eps is not None:
        overrides["eps_geom"] = args.eps
    if args.eps_angle is not None:
        overrides["eps_angle"] = args.eps_angle
    if args.tie_tol is not None:
        overrides["tie_tol"] = args.tie_tol
    try:
        return DEFAULT.with_overrides(**overrides)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    try:
        return args.func(args, make_config(args))
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnboundedError as exc:
        print(f"error: UNBOUNDED: {exc}", file=sys.stderr)
        return EXIT_UNBOUNDED
    except ValidationError as exc:
        names = ",".join(i.value for i in exc.issues)
        print(f"error: {names}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
