"""Plot command: ``plot <kind> <input> -o <output.png> [options]``.

Kinds: heatmap, timeseries, rho-curve, snapshot.  Exit codes: 0 on
success, 2 on bad flags, 1 when the input file is missing or malformed
(the message names the offending line).
"""

from __future__ import annotations

import argparse
import sys

from .formats import FormatError
from .render import PALETTES, render_heatmap, render_rho, render_snapshot, render_timeseries


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render simulator CSV / snapshot files as images.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "kind", choices=("heatmap", "timeseries", "rho-curve", "snapshot"),
        help="plot type, matching the input file format",
    )
    parser.add_argument("input", help="CSV or snapshot file to render")
    parser.add_argument("-o", "--output", required=True, help="output image path (.png)")
    parser.add_argument("--palette", choices=sorted(PALETTES), default="four-class",
                        help="snapshot colors: four-class codes or pure C/D")
    parser.add_argument("--scale", type=int, default=8, help="snapshot pixels per cell")
    parser.add_argument("--cmap", default="viridis", help="heatmap colormap")
    parser.add_argument("--series", choices=("coop", "rewards", "all"), default="coop",
                        help="timeseries columns to draw")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.kind == "snapshot":
            render_snapshot(args.input, args.output, palette=args.palette, scale=args.scale)
        elif args.kind == "heatmap":
            render_heatmap(args.input, args.output, cmap=args.cmap)
        elif args.kind == "timeseries":
            render_timeseries(args.input, args.output, series=args.series)
        else:
            render_rho(args.input, args.output)
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
