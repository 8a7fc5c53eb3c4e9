"""Sweep runners, CSV emitters and field dumps for the experiment harness."""

import time
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConditioningWarning, TruncationWarning
from .scenarios import ConfigError, build_problem
from .solution import (
    dump_field_component,
    error_norms,
    sample_field,
    solve_system,
)

CSV_HEADER = "sweep,N,l2_rel,h1_rel,residual,cond,seconds"
COMPARE_HEADER = ("sweep,N_dtn,l2_rel_dtn,h1_rel_dtn,"
                  "N_imp,l2_rel_imp,h1_rel_imp")


@dataclass
class SweepRecord:
    sweep: float
    N: int
    l2_rel: float
    h1_rel: float
    residual: float
    cond: float
    seconds: float
    note: str = ""

    def csv_row(self):
        return (f"{_fmt(self.sweep)},{self.N},{_fmt(self.l2_rel)},"
                f"{_fmt(self.h1_rel)},{_fmt(self.residual)},"
                f"{_fmt(self.cond)},{self.seconds:.3f}")


def _fmt(value):
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return "nan"
    if isinstance(value, int):
        return str(value)
    if float(value) == int(value) and abs(value) < 1e15:
        return str(int(value))
    return f"{value:.12e}"


def _run_point(cfg, p=None, h=None, M=None, sweep_value=0.0):
    start = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditioningWarning)
        warnings.simplefilter("ignore", TruncationWarning)
        problem = build_problem(cfg, p=p, h=h, M=M)
        sol, residual, cond = solve_system(problem.system, problem.mesh,
                                           problem.space)
        if problem.exact is not None:
            report = error_norms(sol, problem.exact, order=cfg.duffy_order)
            l2_rel, h1_rel = report.l2_rel, report.h1_rel
        else:
            l2_rel = h1_rel = float("nan")
    seconds = time.perf_counter() - start
    record = SweepRecord(sweep=sweep_value, N=problem.system.n,
                         l2_rel=l2_rel, h1_rel=h1_rel, residual=residual,
                         cond=cond, seconds=seconds)
    return record, sol, problem


def run_solve(cfg):
    """Solve the configured problem once."""
    return _run_point(cfg, sweep_value=float(cfg.p))


def run_sweep(cfg, kind):
    """Run a p-, h- or M-sweep and return the records (plus CSV if cfg.out).

    A failing sweep point is recorded as a NaN row with the error noted and
    the sweep continues.
    """
    if kind == "p":
        values = list(cfg.p_list)
        points = [dict(p=v) for v in values]
    elif kind == "h":
        values = list(cfg.h_list)
        points = [dict(h=v) for v in values]
    elif kind == "M":
        values = list(cfg.M_list)
        points = [dict(M=v) for v in values]
    else:
        raise ConfigError(f"unknown sweep kind {kind!r}")
    records = []
    for value, kwargs in zip(values, points):
        try:
            record, _, _ = _run_point(cfg, sweep_value=float(value), **kwargs)
        except ConfigError:
            raise
        except Exception as exc:  # recorded, sweep continues
            record = SweepRecord(sweep=float(value), N=0, l2_rel=float("nan"),
                                 h1_rel=float("nan"), residual=float("nan"),
                                 cond=float("nan"), seconds=0.0,
                                 note=f"{type(exc).__name__}: {exc}")
        records.append(record)
    if cfg.out:
        write_sweep_csv(cfg.out, records)
    return records


def write_sweep_csv(path, records):
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for record in records:
            fh.write(record.csv_row() + "\n")
            if record.note:
                fh.write(f"# error at sweep={_fmt(record.sweep)}: {record.note}\n")


def run_compare(cfg):
    """Per-p errors of the DtN and impedance methods on the same scenario."""
    if cfg.scenario != "two_layer":
        raise ConfigError("compare requires the two_layer scenario")
    rows = []
    for p in cfg.p_list:
        rec_dtn, _, _ = _run_point(replace(cfg, method="dtn"), p=p,
                                   sweep_value=float(p))
        rec_imp, _, _ = _run_point(replace(cfg, method="impedance"), p=p,
                                   sweep_value=float(p))
        rows.append((rec_dtn, rec_imp))
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(COMPARE_HEADER + "\n")
            for rec_dtn, rec_imp in rows:
                fh.write(f"{_fmt(rec_dtn.sweep)},{rec_dtn.N},"
                         f"{_fmt(rec_dtn.l2_rel)},{_fmt(rec_dtn.h1_rel)},"
                         f"{rec_imp.N},{_fmt(rec_imp.l2_rel)},"
                         f"{_fmt(rec_imp.h1_rel)}\n")
    return rows


def run_field_dump(cfg, grid=(200, 100), extend=0, out_stem="field",
                   p_values=None):
    """Sample re/im/abs component files for one or two direction counts.

    With two p values the pointwise difference field is dumped as well; the
    scatterer profile, when the scenario defines one, goes to
    ``<stem>_profile.dat``.
    """
    p_values = list(p_values or [cfg.p])
    if len(p_values) > 2:
        raise ConfigError("at most two p values per field dump")
    alpha0 = cfg.k * np.cos(cfg.theta) if cfg.method == "dtn" else 0.0
    sampled = []
    written = []
    problem = None
    for p in p_values:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConditioningWarning)
            warnings.simplefilter("ignore", TruncationWarning)
            problem = build_problem(cfg, p=p)
            sol, _, _ = solve_system(problem.system, problem.mesh, problem.space)
        xs, ys, values = sample_field(sol, grid, extend=extend, alpha0=alpha0)
        sampled.append(values)
        for name, comp in (("re", values.real), ("im", values.imag),
                           ("abs", np.abs(values))):
            path = f"{out_stem}_p{p}_{name}.dat"
            dump_field_component(path, xs, ys, comp)
            written.append(path)
    if len(sampled) == 2:
        diff = sampled[1] - sampled[0]
        for name, comp in (("re", diff.real), ("im", diff.imag),
                           ("abs", np.abs(diff))):
            path = f"{out_stem}_diff_{name}.dat"
            dump_field_component(path, xs, ys, comp)
            written.append(path)
    if problem is not None and problem.interface is not None:
        path = f"{out_stem}_profile.dat"
        dump_profile(problem.interface, path)
        written.append(path)
    return written


def dump_profile(interface, path):
    """Write interface polylines as 'x1 x2' rows, blank line between lines."""
    with open(path, "w") as fh:
        for poly in interface.polylines:
            for x, y in poly:
                fh.write(f"{x:.12e} {y:.12e}\n")
            fh.write("\n")
