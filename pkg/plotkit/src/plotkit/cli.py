"""plotkit command line: one figure kind, one or more CSVs, one image.

    plotkit <kind> --in <csv> [--in <csv2> ...] --out <img> [--title ...]

Exit codes: 0 on success (a header-only CSV still renders an empty-axes
figure), 1 for schema mismatches and unreadable inputs (the message names
the offending columns), 2 for usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, render_to_file
from .schemas import KINDS, SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render figures from biclique-lab CSV files.",
    )
    parser.add_argument("kind", choices=KINDS, help="figure kind")
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        required=True,
        metavar="CSV",
        help="input CSV; repeat to overlay several files",
    )
    parser.add_argument("--out", required=True, metavar="IMG", help="output image path")
    parser.add_argument("--title", default=None)
    parser.add_argument("--xlabel", default=None)
    parser.add_argument("--ylabel", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    spec = PlotSpec(
        inputs=tuple(args.inputs),
        kind=args.kind,
        out=args.out,
        title=args.title,
        xlabel=args.xlabel,
        ylabel=args.ylabel,
    )
    try:
        result = render_to_file(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {spec.out} ({len(result.series)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
