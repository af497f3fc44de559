"""Figure rendering over the simulator's scenario tables.

Two kinds cover the catalog: ``lines`` draws sweep columns against the
sweep value with one curve per scenario case, and ``contour`` rasterizes
the allocation-region grid with the zero-secrecy boundary overlaid.
Everything plotted is read straight from the CSV; the only transform on
offer is a decibel conversion of the x axis.
"""

from dataclasses import dataclass, field, replace

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .tables import GRID_KEYS, SWEEP_KEY, TableError, read_table

KINDS = ("lines", "contour")

_RC = {
    "figure.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 8,
    "lines.linewidth": 1.4,
}


@dataclass(frozen=True)
class PlotSpec:
    """What to draw and where to put it.

    ``y`` lists the value columns; for contours it is ignored since the
    grid schema is fixed. ``x_db`` converts the x axis to 10 log10(x).
    """

    csv_path: str
    out_path: str
    kind: str = "lines"
    x: str = SWEEP_KEY
    y: tuple = ("sum_secrecy",)
    x_label: str = ""
    y_label: str = "bits/s/Hz"
    title: str = ""
    x_db: bool = False


@dataclass
class RenderResult:
    """Where the image landed, plus the traced zero contours per panel."""

    path: str
    boundaries: dict = field(default_factory=dict)


def _strip(name):
    base = name[3:] if name.startswith("hd_") else name
    return base[:-7] if base.endswith("_approx") else base


def _style(name):
    if name.endswith("_approx"):
        return "--"
    if name.startswith("hd_"):
        return ":"
    return "-"


def _case(label):
    return label.split("/", 1)[1] if "/" in label else label


def _draw_lines(ax, table, spec):
    x_all = table.floats(spec.x)
    if spec.x_db:
        # A zero sweep value has no decibel image; the -inf point simply
        # drops out of the drawn range.
        with np.errstate(divide="ignore"):
            x_all = 10.0 * np.log10(x_all)
    groups = table.groups()
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    assigned = {}
    for label, idx in groups.items():
        order = np.argsort(x_all[idx], kind="stable")
        rows = np.asarray(idx)[order]
        for col in spec.y:
            values = table.floats(col)[rows]
            if np.all(np.isnan(values)):
                continue
            key = (label, _strip(col))
            if key not in assigned:
                assigned[key] = colors[len(assigned) % len(colors)]
            if len(spec.y) == 1:
                text = _case(label)
            elif len(groups) == 1:
                text = col
            else:
                text = f"{_case(label)} {col}"
            ax.plot(x_all[rows], values, _style(col), color=assigned[key],
                    label=text)
    ax.set_xlabel(spec.x_label or spec.x)
    ax.set_ylabel(spec.y_label)
    ax.legend()


def _pivot(ga, gb, values):
    """Reshape grid columns onto the (gamma_a, gamma_b) lattice."""
    a_axis = np.unique(ga)
    b_axis = np.unique(gb)
    z = np.full((b_axis.size, a_axis.size), np.nan)
    ai = np.searchsorted(a_axis, ga)
    bi = np.searchsorted(b_axis, gb)
    z[bi, ai] = values
    return a_axis, b_axis, z


def _draw_grid(fig, table, spec):
    """Region panels: one row per case, one column per link direction.

    The fill shows the approximate secrecy rate of the link; the heavy
    line is the zero level of the boundary residual, which is what the
    region figure is about. Returns the traced boundary segments keyed
    by (case label, link).
    """
    groups = table.groups()
    ga_all = table.floats(GRID_KEYS[0])
    gb_all = table.floats(GRID_KEYS[1])
    panels = (("a", "secrecy_a_approx", "boundary_a"),
              ("b", "secrecy_b_approx", "boundary_b"))
    for name in [c for _, fill, line in panels for c in (fill, line)]:
        table.column(name)
    boundaries = {}
    axes = fig.subplots(len(groups), 2, squeeze=False)
    for r, (label, idx) in enumerate(groups.items()):
        rows = np.asarray(idx)
        for c, (link, fill_col, line_col) in enumerate(panels):
            ax = axes[r][c]
            a_axis, b_axis, fill = _pivot(ga_all[rows], gb_all[rows],
                                          table.floats(fill_col)[rows])
            _, _, residual = _pivot(ga_all[rows], gb_all[rows],
                                    table.floats(line_col)[rows])
            shading = ax.contourf(a_axis, b_axis, fill, levels=12,
                                  cmap="viridis")
            fig.colorbar(shading, ax=ax, shrink=0.85)
            traced = ax.contour(a_axis, b_axis, residual, levels=[0.0],
                                colors="crimson", linewidths=1.8)
            # A residual with one sign everywhere traces as a single empty
            # polyline; drop those so callers can test "any boundary" with
            # plain truthiness.
            boundaries[(label, link)] = [seg for seg in traced.allsegs[0]
                                         if len(seg)]
            ax.set_xlabel("gamma_a")
            ax.set_ylabel("gamma_b")
            ax.set_title(f"{_case(label)}: link {link}", fontsize=9)
    return boundaries


def render(spec):
    """Draw one figure and write it to ``spec.out_path``."""
    if spec.kind not in KINDS:
        raise TableError(f"unknown plot kind {spec.kind!r} "
                         f"(choose from {', '.join(KINDS)})")
    table = read_table(spec.csv_path)
    result = RenderResult(spec.out_path)
    with plt.rc_context(_RC):
        if spec.kind == "contour":
            if not table.is_grid:
                raise TableError(f"{spec.csv_path} is not a grid table; "
                                 "contour plots need gamma_a/gamma_b columns")
            fig = plt.figure(figsize=(8.0, 3.2 * len(table.groups())))
            result.boundaries = _draw_grid(fig, table, spec)
        else:
            fig, ax = plt.subplots(figsize=(6.4, 4.2))
            _draw_lines(ax, table, spec)
        if spec.title:
            fig.suptitle(spec.title)
        fig.tight_layout()
        fig.savefig(spec.out_path)
        plt.close(fig)
    return result


_RATE_PAIRS = ("r_ba", "r_ba_approx", "r_ab", "r_ab_approx",
               "r_ea", "r_ea_approx", "r_eb", "r_eb_approx")

PRESETS = {
    "fig2a": dict(kind="lines", y=_RATE_PAIRS, x_label="signal fraction",
                  title="simulated rates vs approximation, AN known"),
    "fig2b": dict(kind="lines", y=_RATE_PAIRS, x_label="signal fraction",
                  title="simulated rates vs approximation, AN unknown"),
    "fig3": dict(kind="contour",
                 title="approximate secrecy over the allocation square"),
    "fig4a": dict(kind="lines", y=("sum_secrecy", "hd_sum_secrecy"),
                  x_label="signal fraction",
                  title="duplex vs alternating-slot baseline"),
    "fig4b": dict(kind="lines", y=("sum_secrecy", "hd_sum_secrecy"),
                  x_label="signal fraction",
                  title="duplex vs baseline, 1.5x baseline error"),
    "fig5": dict(kind="lines", y=("r_ea",),
                 x_label="signal-space share of the AN budget",
                 title="eavesdropper rate under the AN placements"),
    "fig6": dict(kind="lines", x_label="self-interference gain",
                 title="sum secrecy vs residual self-interference"),
    "fig7": dict(kind="lines", x_label="eavesdropper x location",
                 title="sum secrecy vs eavesdropper position"),
    "fig8": dict(kind="lines", x_label="transmit power (dB)",
                 title="sum secrecy vs power budget"),
}


def preset_spec(name, csv_path, out_path):
    """PlotSpec for a catalog scenario, by scenario id."""
    if name not in PRESETS:
        raise TableError(f"unknown preset {name!r} "
                         f"(choose from {', '.join(sorted(PRESETS))})")
    return replace(PlotSpec(csv_path, out_path), **PRESETS[name])
