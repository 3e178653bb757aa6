"""Command-line entry points.

``lswplot render --curve <csv>... --out <img>`` draws exclusion regions;
``lswplot render-campaign --record <csv> --out <img>`` draws a per-pulse
count record.  Schema violations and usage problems exit with code 2 and a
message naming the offending column or line.
"""

import argparse
import sys

from .curvefile import SchemaError, read_curve, read_record
from .render import render_campaign, render_exclusion


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lswplot",
        description="Render exclusion-region and campaign figures from lswlab CSV files.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="draw one or more exclusion curves")
    p.add_argument("--curve", action="append", required=True, metavar="CSV",
                   help="curve file; repeat to overlay several")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--mass-unit", choices=("ev", "mev"), default="ev")
    p.add_argument("--coupling-unit", choices=("ev", "gev"), default="ev")
    p.add_argument("--style", default=None, help="matplotlib style file")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("render-campaign", help="draw a campaign count record")
    p.add_argument("--record", required=True, metavar="CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--style", default=None)
    p.set_defaults(func=cmd_render_campaign)

    return parser


def cmd_render(args) -> int:
    curves = [read_curve(path) for path in args.curve]
    render_exclusion(curves, args.out, mass_unit=args.mass_unit,
                     coupling_unit=args.coupling_unit, style=args.style)
    return 0


def cmd_render_campaign(args) -> int:
    render_campaign(read_record(args.record), args.out, style=args.style)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
