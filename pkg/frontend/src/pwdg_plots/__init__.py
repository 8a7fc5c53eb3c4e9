"""Rendering of PWDG solver outputs: convergence curves and field heatmaps."""

from .figures import compare_figure, convergence_figure, field_figure, save_figure
from .io import (
    GridMismatchError,
    SchemaError,
    read_field_component,
    read_field_components,
    read_profile,
    read_sweep_csv,
)

__all__ = [
    "compare_figure",
    "convergence_figure",
    "field_figure",
    "save_figure",
    "GridMismatchError",
    "SchemaError",
    "read_field_component",
    "read_field_components",
    "read_profile",
    "read_sweep_csv",
]
