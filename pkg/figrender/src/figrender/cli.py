"""fig-render: draw one experiment figure from record files.

Usage: fig-render --fig N --in <csv/json ...> --out <path>
Exit codes: 0 success, 2 bad arguments or schema mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FigureSpec, render
from .io import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fig-render",
        description="Render experiment figures from CSV/JSON record files")
    parser.add_argument("--fig", type=int, required=True, choices=range(1, 6),
                        help="figure number (1-5)")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        help="input record files (CSV or JSON)")
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        spec = FigureSpec(figure=args.fig, inputs=tuple(args.inputs),
                          output=Path(args.out))
        info = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    detail = ""
    if "max_curve_deviation" in info:
        detail = f"  max_curve_deviation={info['max_curve_deviation']:.3e}"
    print(f"wrote {args.out}{detail}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
