"""Rendering companion for the duplexsec scenario tables."""

from .figures import PRESETS, PlotSpec, RenderResult, preset_spec, render
from .tables import Table, TableError, read_table

__all__ = [
    "PRESETS",
    "PlotSpec",
    "RenderResult",
    "Table",
    "TableError",
    "preset_spec",
    "read_table",
    "render",
]
