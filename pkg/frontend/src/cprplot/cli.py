"""Figure CLI: cpr-plot density|trajectories|critical-map --in F --out IMG.

Inputs are the simulation engine's CSV files: the NAME.rstar.csv matrix for
density (axis sidecars located next to it), a NAME.series.csv for
trajectories, and NAME.map.csv for threshold maps. --overlay draws the
analytic threshold line on density plots; --no-boundary suppresses the
regime-split line on threshold maps. Exit codes: 0 success, 1 usage error,
2 unreadable or schema-violating input, 3 cannot write the image.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FigureRequest, render
from .readers import SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpr-plot", description=__doc__)
    parser.add_argument("kind", choices=["density", "trajectories", "critical-map"])
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        help="input CSV (main file; sidecars found by name)")
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--overlay", type=float, default=None,
                        help="horizontal threshold line for density plots")
    parser.add_argument("--no-boundary", action="store_true",
                        help="omit the regime-split line on threshold maps")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    try:
        request = FigureRequest(
            kind=args.kind,
            inputs=tuple(args.inputs),
            output=args.out,
            overlay=args.overlay,
            draw_boundary=not args.no_boundary,
        )
    except ValueError as exc:
        print(f"cpr-plot: {exc}", file=sys.stderr)
        return 1

    try:
        path = render(request)
    except (FileNotFoundError, SchemaError) as exc:
        print(f"cpr-plot: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cpr-plot: cannot write image: {exc}", file=sys.stderr)
        return 3
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
