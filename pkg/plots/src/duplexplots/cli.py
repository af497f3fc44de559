"""Command line front end: one CSV in, one image out."""

import argparse
import os
import sys
from dataclasses import replace

from .figures import KINDS, PRESETS, PlotSpec, preset_spec, render
from .tables import TableError


def build_parser():
    parser = argparse.ArgumentParser(
        prog="duplexplot",
        description="Render a duplexsec scenario table to an image.")
    parser.add_argument("--csv", required=True, help="scenario CSV to read")
    parser.add_argument("--out", help="image path (default: CSV name + .png)")
    parser.add_argument("--preset", metavar="ID",
                        help="catalog defaults for one scenario "
                             f"({', '.join(sorted(PRESETS))})")
    parser.add_argument("--kind", choices=KINDS,
                        help="plot kind (overrides the preset)")
    parser.add_argument("--x", help="x column (default sweep_value)")
    parser.add_argument("--y", help="comma-separated value columns")
    parser.add_argument("--x-db", action="store_true",
                        help="convert the x axis to 10*log10(x)")
    parser.add_argument("--title", help="figure title")
    return parser


def _spec_from_args(args):
    out = args.out or os.path.splitext(args.csv)[0] + ".png"
    if args.preset:
        spec = preset_spec(args.preset, args.csv, out)
    else:
        spec = PlotSpec(args.csv, out)
    overrides = {}
    if args.kind:
        overrides["kind"] = args.kind
    if args.x:
        overrides["x"] = args.x
    if args.y:
        overrides["y"] = tuple(c.strip() for c in args.y.split(",") if c.strip())
    if args.x_db:
        overrides["x_db"] = True
    if args.title:
        overrides["title"] = args.title
    return replace(spec, **overrides) if overrides else spec


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        result = render(_spec_from_args(args))
    except TableError as exc:
        print(f"plot error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {result.path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
