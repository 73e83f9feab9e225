"""Command-line entry point: poolfig render --figure fig1a --in summary.csv --out fig1a.svg"""

from __future__ import annotations

import argparse
import sys

from .errors import MissingCell, PoolFigError, SchemaMismatch
from .render import FIGURE_IDS, FigureSpec, render

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 2, 3, 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poolfig",
        description="Render grouped-bar pooling-gain charts from summary.csv")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure (SVG + PNG)")
    p.add_argument("--figure", required=True, choices=FIGURE_IDS)
    p.add_argument("--in", dest="in_path", required=True,
                   help="summary.csv produced by the simulator")
    p.add_argument("--out", dest="out_path", required=True,
                   help="output image path (.svg or .png; both are written)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    spec = FigureSpec(figure_id=args.figure, in_path=args.in_path,
                      out_path=args.out_path)
    try:
        written = render(spec)
    except (SchemaMismatch, MissingCell) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except PoolFigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
