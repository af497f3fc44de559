"""Delimited table access for the plotting tool.

The simulator writes one CSV per scenario: sweep tables keyed by
``scenario_id`` and ``sweep_value``, and one grid table keyed by
``gamma_a``/``gamma_b`` for the allocation-region figure. This module
reads either kind back as raw columns. It never computes rates; all
numbers come from the file.
"""

import csv

import numpy as np

SWEEP_KEY = "sweep_value"
GRID_KEYS = ("gamma_a", "gamma_b")
SERIES_KEY = "scenario_id"


class TableError(Exception):
    """Raised when a CSV file cannot back the requested plot."""


class Table:
    """One scenario CSV held as a header and string-valued rows."""

    def __init__(self, path, header, rows):
        self.path = path
        self.header = tuple(header)
        self.rows = rows
        self._index = {name: k for k, name in enumerate(self.header)}

    def __len__(self):
        return len(self.rows)

    @property
    def is_grid(self):
        return all(key in self._index for key in GRID_KEYS) and SWEEP_KEY not in self._index

    def column(self, name):
        """Raw strings of one column; unknown names name themselves."""
        if name not in self._index:
            raise TableError(f"column {name!r} not in {self.path} "
                             f"(header: {', '.join(self.header)})")
        k = self._index[name]
        return [row[k] for row in self.rows]

    def floats(self, name):
        """One column as a float array, empty cells becoming NaN."""
        return np.array([float(v) if v else np.nan for v in self.column(name)])

    def groups(self):
        """Row indices per series label, in first-appearance order."""
        out = {}
        for k, label in enumerate(self.column(SERIES_KEY)):
            out.setdefault(label, []).append(k)
        return out


def read_table(path):
    """Load a scenario CSV, rejecting files without data rows."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            records = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    if not records:
        raise TableError(f"empty table: {path}")
    header, rows = records[0], records[1:]
    if not rows:
        raise TableError(f"no data rows in {path}")
    width = len(header)
    for k, row in enumerate(rows):
        if len(row) != width:
            raise TableError(f"row {k + 2} of {path} has {len(row)} cells, "
                             f"expected {width}")
    return Table(path, header, rows)
