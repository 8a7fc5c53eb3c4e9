"""Command-line front end.

Subcommands: solve, sweep-p, sweep-h, sweep-m, compare, field.  Every
subcommand accepts --config FILE plus key=value overrides; defaults are
M=100, UWVF fluxes (alpha=beta=delta=1/2), Duffy order 10 and 10
Gauss-Legendre points per edge.  Exit codes: 0 success, 2 configuration
error, 3 numerical failure.
"""

import argparse
import sys
from dataclasses import replace

from .assembly import dump_system
from .errors import SingularMatrixError, WoodAnomalyError
from .geometry import save_mesh
from .harness import (
    CSV_HEADER,
    run_compare,
    run_field_dump,
    run_solve,
    run_sweep,
    write_sweep_csv,
)
from .scenarios import ConfigError, parse_config


def _add_common(parser):
    parser.add_argument("--config", default=None, help="flat key=value config file")
    parser.add_argument("--out", default=None, help="output CSV / dump stem")
    parser.add_argument("overrides", nargs="*", metavar="key=value",
                        help="config overrides")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="grating-pwdg",
        description="Plane-wave DG solvers for Helmholtz grating problems")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
            ("solve", "assemble and solve a single configuration"),
            ("sweep-p", "sweep the number of plane-wave directions"),
            ("sweep-h", "sweep the mesh width"),
            ("sweep-m", "sweep the DtN truncation order"),
            ("compare", "DtN vs impedance errors on the same scenario"),
            ("field", "dump field component files on a sample grid")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        if name == "solve":
            p.add_argument("--mesh-dump", default=None)
            p.add_argument("--matrix-dump", default=None)
        if name == "field":
            p.add_argument("--grid", nargs=2, type=int, default=(200, 100),
                           metavar=("NX", "NY"))
            p.add_argument("--extend", type=int, default=0,
                           help="quasi-periodic copies on each side")
            p.add_argument("--p-values", default=None, metavar="P1[,P2]",
                           help="one or two comma-separated direction counts")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config, args.overrides)
        if args.out:
            cfg = replace(cfg, out=args.out).validate()
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "solve":
            record, sol, problem = run_solve(cfg)
            if args.mesh_dump:
                save_mesh(problem.mesh, args.mesh_dump)
            if args.matrix_dump:
                dump_system(problem.system, args.matrix_dump)
            print(CSV_HEADER)
            print(record.csv_row())
            if cfg.out:
                write_sweep_csv(cfg.out, [record])
        elif args.command in ("sweep-p", "sweep-h", "sweep-m"):
            kind = {"sweep-p": "p", "sweep-h": "h", "sweep-m": "M"}[args.command]
            records = run_sweep(cfg, kind)
            print(CSV_HEADER)
            for record in records:
                print(record.csv_row())
        elif args.command == "compare":
            rows = run_compare(cfg)
            for rec_dtn, rec_imp in rows:
                print(f"p={rec_dtn.sweep:.0f} dtn={rec_dtn.l2_rel:.6e} "
                      f"impedance={rec_imp.l2_rel:.6e}")
        elif args.command == "field":
            p_values = None
            if args.p_values:
                p_values = [int(v) for v in args.p_values.split(",") if v]
            written = run_field_dump(cfg, grid=tuple(args.grid),
                                     extend=args.extend,
                                     out_stem=cfg.out or "field",
                                     p_values=p_values)
            for path in written:
                print(path)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (SingularMatrixError, WoodAnomalyError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
