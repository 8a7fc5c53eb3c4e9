"""Script front end: plot convergence|compare|field <inputs> <out.png>."""

import argparse
import sys

from .figures import compare_figure, convergence_figure, field_figure, save_figure
from .io import GridMismatchError, SchemaError


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="plot", description="Render PWDG solver CSV and field dumps")
    sub = parser.add_subparsers(dest="command", required=True)
    conv = sub.add_parser("convergence", help="semilog error curves from a sweep CSV")
    conv.add_argument("csv")
    conv.add_argument("out")
    conv.add_argument("--kind", choices=("p", "h", "m", "generic"),
                      default="generic",
                      help="sweep kind; 'h' adds a slope-2 guide line")
    conv.add_argument("--title", default=None)
    cmp = sub.add_parser("compare", help="DtN vs impedance curves from a compare CSV")
    cmp.add_argument("csv")
    cmp.add_argument("out")
    cmp.add_argument("--title", default=None)
    fld = sub.add_parser("field", help="heatmap panel per component file")
    fld.add_argument("files", nargs="+",
                     help="component files followed by the output image")
    fld.add_argument("--profile", default=None,
                     help="overlay polyline file (dotted)")
    fld.add_argument("--title", default=None)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "convergence":
            fig = convergence_figure(args.csv, kind=args.kind, title=args.title)
            save_figure(fig, args.out)
            print(args.out)
        elif args.command == "compare":
            fig = compare_figure(args.csv, title=args.title)
            save_figure(fig, args.out)
            print(args.out)
        elif args.command == "field":
            if len(args.files) < 2:
                print("field needs component files plus an output image",
                      file=sys.stderr)
                return 2
            *components, out = args.files
            fig = field_figure(components, profile_path=args.profile,
                               title=args.title)
            save_figure(fig, out)
            print(out)
    except (SchemaError, GridMismatchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
