"""Command line for rendering sweep CSVs into figures.

    backflow-plots render --input sweep.csv [--input free.csv ...]
        --kind curve|landscape --out figure.svg
        [--beta0 <real>] [--format svg|png] [--series strength|conserved]

Exit codes: 0 success, 2 configuration/schema error.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .figures import FigureSpec, render
from .reader import SchemaError

EXIT_OK = 0
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="backflow-plots", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render a figure from sweep CSV files")
    p.add_argument("--input", action="append", required=True,
                   help="sweep CSV path (repeatable; rows are concatenated)")
    p.add_argument("--kind", choices=("curve", "landscape"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--beta0", type=float, default=None,
                   help="free reference value when no free-case row is present")
    p.add_argument("--format", choices=("svg", "png"), default="svg")
    p.add_argument("--series", choices=("strength", "conserved"), default="strength")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        render(FigureSpec(
            inputs=tuple(args.input),
            kind=args.kind,
            out=args.out,
            series=args.series,
            fmt=args.format,
            beta0=args.beta0,
        ))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"wrote {args.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
