"""Command-line front end: render metrics CSVs as charts."""

import argparse
import sys

from .render import KINDS, PlotSpec, dump_text, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="npgplots", description="Render benchmark metrics CSVs as charts."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one chart from metrics CSVs")
    p.add_argument("--kind", required=True, choices=sorted(KINDS), help="chart kind")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="CSV",
                   help="metrics CSV files")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--agg", choices=("per-seed", "median-band"), default="per-seed",
                   help="one series per seed, or median line with min-max band")
    p.add_argument("--dump", action="store_true",
                   help="also print the plotted series as text")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = PlotSpec(inputs=tuple(args.inputs), kind=args.kind, out=args.out, agg=args.agg)
        series = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.dump:
        sys.stdout.write(dump_text(spec, series))
    return 0


if __name__ == "__main__":
    sys.exit(main())
