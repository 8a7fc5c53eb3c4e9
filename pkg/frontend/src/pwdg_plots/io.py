"""Readers for the solver's CSV and field-dump file formats."""

import numpy as np

SWEEP_HEADER = "sweep,N,l2_rel,h1_rel,residual,cond,seconds"
COMPARE_HEADER = ("sweep,N_dtn,l2_rel_dtn,h1_rel_dtn,"
                  "N_imp,l2_rel_imp,h1_rel_imp")


class SchemaError(ValueError):
    """Input file does not match the documented format."""


class GridMismatchError(ValueError):
    """Field component files disagree on the sample grid."""


def read_sweep_csv(path, header=SWEEP_HEADER):
    """Parse a sweep CSV into a dict of column arrays.

    Comment lines (leading '#') are skipped; NaN rows from failed sweep
    points are kept.  Raises SchemaError on a wrong header or an empty body.
    """
    names = header.split(",")
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines or lines[0] != header:
        raise SchemaError(f"{path}: expected header {header!r}")
    rows = []
    for line in lines[1:]:
        if line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != len(names):
            raise SchemaError(f"{path}: malformed row {line!r}")
        rows.append([float(v) for v in parts])
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    data = np.array(rows)
    return {name: data[:, i] for i, name in enumerate(names)}


def read_field_component(path):
    """Parse one '# grid NX NY' + 'x1 x2 value' component file.

    Returns (xs, ys, values) with values shaped (ny, nx).
    """
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[:2] != ["#", "grid"]:
            raise SchemaError(f"{path}: missing '# grid NX NY' header")
        nx, ny = int(header[2]), int(header[3])
        data = np.loadtxt(fh)
    if data.shape != (nx * ny, 3):
        raise SchemaError(f"{path}: expected {nx * ny} rows of 'x1 x2 value'")
    xs = data[:nx, 0]
    ys = data[::nx, 1]
    values = data[:, 2].reshape(ny, nx)
    return xs, ys, values


def read_field_components(paths):
    """Read several component files and verify they share one grid."""
    fields = []
    ref = None
    for path in paths:
        xs, ys, values = read_field_component(path)
        if ref is None:
            ref = (xs, ys)
        elif len(xs) != len(ref[0]) or len(ys) != len(ref[1]) \
                or not (np.allclose(xs, ref[0]) and np.allclose(ys, ref[1])):
            raise GridMismatchError(f"{path}: grid differs from {paths[0]}")
        fields.append(values)
    return ref[0], ref[1], fields


def read_profile(path):
    """Parse 'x1 x2' polyline rows separated by blank lines."""
    polylines = []
    current = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                if current:
                    polylines.append(np.array(current))
                    current = []
                continue
            x, y = (float(v) for v in line.split())
            current.append((x, y))
    if current:
        polylines.append(np.array(current))
    return polylines
