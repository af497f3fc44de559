"""Named experiment sweeps producing delimited result tables.

A scenario bundles a base configuration, a sweep variable, and one or
more transmission cases. Running it yields, per sweep point and case,
Monte Carlo averages of the exact rates next to the closed-form
approximations, ready for the plotting tool. Scenario names follow the
figures of the default report (``fig2a`` .. ``fig8``).
"""

import csv
import os
from dataclasses import dataclass, replace

import numpy as np

from .approx import ergodic_rate_approx, zero_secrecy_boundary
from .channel import SystemConfig, sample_channel_set, trial_rng
from .coarse_alloc import allocate_coarse
from .fine_alloc import allocate_fine
from .precoding import build_precoder_set
from .rates import RateReport, rate_eve, rate_legitimate, rate_report, secrecy_rates

CATALOG_VERSION = "1"

SWEEP_VARIABLES = ("power_fraction", "eve_x", "eta", "tx_power_db", "xi", "kappa")

SIGNAL_POLICIES = ("equal", "proportional")
AN_POLICIES = ("uniform", "min_stream", "eigen_inverse")


@dataclass(frozen=True)
class CaseSpec:
    """One transmission strategy within a scenario.

    ``gamma_policy`` is ``"fixed"`` (use ``gamma``) or ``"coarse"`` (run
    the two-step allocator per sweep point); a ``power_fraction`` sweep
    overrides either. ``xi`` feeds the eigenvalue-inverse AN split and is
    replaced by the sweep value when the scenario sweeps ``xi``.
    """

    label: str
    theta: int
    kappa: float
    gamma_policy: str = "coarse"
    gamma: float = None
    signal: str = "equal"
    an: str = "uniform"
    xi: float = None
    hd_baseline: bool = False
    hd_error_scale: float = 1.0


@dataclass(frozen=True)
class Scenario:
    """A named sweep (or gamma grid) over a set of cases."""

    name: str
    sweep_variable: str
    sweep_values: tuple
    cases: tuple
    base: SystemConfig
    kind: str = "sweep"
    grid_points: int = 41
    description: str = ""


@dataclass
class SweepRow:
    """One averaged sweep point for one case."""

    scenario_id: str
    sweep_value: float
    r_ba: float
    r_ab: float
    r_ea: float
    r_eb: float
    r_sa: float
    r_sb: float
    sum_secrecy: float
    r_ba_approx: float
    r_ab_approx: float
    r_ea_approx: float
    r_eb_approx: float
    gamma_a: float
    gamma_b: float
    iterations: int
    trials: int
    hd_sum_secrecy: float = None


@dataclass
class GridRow:
    """Approximate secrecy and boundary residuals at one gamma pair."""

    scenario_id: str
    gamma_a: float
    gamma_b: float
    secrecy_a_approx: float
    secrecy_b_approx: float
    boundary_a: float
    boundary_b: float


SWEEP_FIELDS = tuple(SweepRow.__dataclass_fields__)
GRID_FIELDS = tuple(GridRow.__dataclass_fields__)


def apply_case(cfg, case):
    """Base config with the case's AN knowledge and mismatch applied."""
    return replace(cfg, theta=case.theta, kappa_a=case.kappa, kappa_b=case.kappa)


def apply_sweep(cfg, variable, value):
    """Config for one sweep point.

    ``power_fraction`` and ``xi`` do not touch the channel model; they
    are consumed by the allocator in the run loop.
    """
    if variable in ("power_fraction", "xi"):
        return cfg
    if variable == "eve_x":
        return replace(cfg, pos_eve=(float(value), cfg.pos_eve[1]))
    if variable == "eta":
        return replace(cfg, eta=float(value))
    if variable == "tx_power_db":
        p = 10.0 ** (float(value) / 10.0)
        return replace(cfg, p_alice=p, p_bob=p)
    if variable == "kappa":
        return replace(cfg, kappa_a=float(value), kappa_b=float(value))
    raise ValueError(f"unknown sweep variable {variable!r}")


def _case_gamma(cfg, case, sweep_variable, value):
    """Signal fractions and solver iteration count for one sweep point."""
    if sweep_variable == "power_fraction":
        return float(value), float(value), 0
    if case.gamma_policy == "fixed":
        if case.gamma is None:
            raise ValueError(
                f"case {case.label!r} has no gamma source: fixed policy "
                "without a value and no power_fraction sweep"
            )
        return float(case.gamma), float(case.gamma), 0
    if case.gamma_policy == "coarse":
        sol = allocate_coarse(cfg)
        return float(sol.u[0]), float(sol.u[1]), sol.iterations
    raise ValueError(f"unknown gamma policy {case.gamma_policy!r}")


def hd_baseline_rates(ch, pre, alloc, cfg):
    """Half-duplex reference rates on one draw.

    The nodes alternate slots, so each direction runs half the time with
    no self-interference, and the eavesdropper overhears one transmitter
    per slot and decodes it alone. Artificial noise still reaches both
    listeners, subject to the same theta convention. Callers pass a
    config with ``eta`` zeroed (and optionally a scaled estimation error)
    so the draw reflects the half-duplex hardware.
    """
    r_ba = 0.5 * rate_legitimate(ch, pre, alloc, cfg, "ba")
    r_ab = 0.5 * rate_legitimate(ch, pre, alloc, cfg, "ab")
    alone_a = replace(ch, h_eb=np.zeros_like(ch.h_eb))
    alone_b = replace(ch, h_ea=np.zeros_like(ch.h_ea))
    r_ea = 0.5 * rate_eve(alone_a, pre, alloc, cfg)[0]
    r_eb = 0.5 * rate_eve(alone_b, pre, alloc, cfg)[1]
    r_sa, r_sb, total = secrecy_rates(r_ba, r_ab, r_ea, r_eb)
    return RateReport(r_ba, r_ab, r_ea, r_eb, r_sa, r_sb, total)


def _run_point(scenario, case, value, seed, trials):
    """Monte Carlo average for one (case, sweep value) pair."""
    cfg = apply_sweep(apply_case(scenario.base, case), scenario.sweep_variable, value)
    gamma_a, gamma_b, iterations = _case_gamma(cfg, case, scenario.sweep_variable, value)
    xi = float(value) if scenario.sweep_variable == "xi" else case.xi
    approx = ergodic_rate_approx(cfg, gamma_a, gamma_b)

    cfg_hd = None
    if case.hd_baseline:
        cfg_hd = replace(
            cfg,
            eta=0.0,
            sigma2_delta_ba=cfg.sigma2_delta_ba * case.hd_error_scale,
            sigma2_delta_ab=cfg.sigma2_delta_ab * case.hd_error_scale,
        )

    acc = np.zeros(7)
    hd_acc = 0.0
    for t in range(trials):
        ch = sample_channel_set(cfg, trial_rng(seed, t))
        pre = build_precoder_set(ch, cfg)
        alloc = allocate_fine(
            cfg, ch, pre, gamma_a, gamma_b,
            signal=case.signal, an=case.an, xi_a=xi, xi_b=xi,
        )
        rep = rate_report(ch, pre, alloc, cfg)
        acc += (rep.r_ba, rep.r_ab, rep.r_ea, rep.r_eb, rep.r_sa, rep.r_sb, rep.sum_secrecy)
        if cfg_hd is not None:
            # Same substream as the duplex draw, so the comparison is paired.
            ch_hd = sample_channel_set(cfg_hd, trial_rng(seed, t))
            pre_hd = build_precoder_set(ch_hd, cfg_hd)
            alloc_hd = allocate_fine(
                cfg_hd, ch_hd, pre_hd, gamma_a, gamma_b,
                signal=case.signal, an=case.an, xi_a=xi, xi_b=xi,
            )
            hd_acc += hd_baseline_rates(ch_hd, pre_hd, alloc_hd, cfg_hd).sum_secrecy
    acc /= trials

    return SweepRow(
        scenario_id=f"{scenario.name}/{case.label}",
        sweep_value=float(value),
        r_ba=acc[0], r_ab=acc[1], r_ea=acc[2], r_eb=acc[3],
        r_sa=acc[4], r_sb=acc[5], sum_secrecy=acc[6],
        r_ba_approx=approx.r_ba, r_ab_approx=approx.r_ab,
        r_ea_approx=approx.r_ea, r_eb_approx=approx.r_eb,
        gamma_a=gamma_a, gamma_b=gamma_b,
        iterations=iterations, trials=trials,
        hd_sum_secrecy=hd_acc / trials if case.hd_baseline else None,
    )


def _run_grid(scenario):
    """Closed-form secrecy surface over the gamma square; no sampling."""
    gammas = np.linspace(0.0, 1.0, scenario.grid_points)
    rows = []
    for case in scenario.cases:
        cfg = apply_case(scenario.base, case)
        sid = f"{scenario.name}/{case.label}"
        for ga in gammas:
            for gb in gammas:
                r = ergodic_rate_approx(cfg, float(ga), float(gb))
                res_a, res_b = zero_secrecy_boundary(cfg, (float(ga), float(gb)))
                rows.append(GridRow(
                    scenario_id=sid,
                    gamma_a=float(ga), gamma_b=float(gb),
                    secrecy_a_approx=max(0.0, r.r_ba - r.r_ea),
                    secrecy_b_approx=max(0.0, r.r_ab - r.r_eb),
                    boundary_a=res_a, boundary_b=res_b,
                ))
    return rows


def run_scenario(scenario, seed=None, trials=None):
    """Run one scenario and return its rows.

    ``seed`` and ``trials`` default to the scenario's base config; grid
    scenarios use neither.
    """
    if scenario.kind == "grid":
        return _run_grid(scenario)
    if scenario.kind != "sweep":
        raise ValueError(f"unknown scenario kind {scenario.kind!r}")
    seed = scenario.base.seed if seed is None else int(seed)
    trials = scenario.base.trials if trials is None else int(trials)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rows = []
    for case in scenario.cases:
        for value in scenario.sweep_values:
            rows.append(_run_point(scenario, case, value, seed, trials))
    return rows


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".9g")


def emit_csv(rows, path):
    """Write rows as a UTF-8 CSV with a header line; floats as %.9g."""
    fields = GRID_FIELDS if rows and isinstance(rows[0], GridRow) else SWEEP_FIELDS
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_format_cell(getattr(row, f)) for f in fields])


def run_and_write(scenario, out_dir, seed=None, trials=None):
    """Run a scenario and write ``<name>.csv`` into ``out_dir``."""
    rows = run_scenario(scenario, seed=seed, trials=trials)
    path = os.path.join(out_dir, scenario.name + ".csv")
    emit_csv(rows, path)
    return path, len(rows)


def write_manifest(out_dir, seed, trials, names):
    """Record what a run produced, one key=value line per entry."""
    path = os.path.join(out_dir, "manifest.txt")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"seed={seed}\n")
        fh.write(f"trials={trials}\n")
        fh.write(f"catalog={CATALOG_VERSION}\n")
        fh.write("scenarios=" + ",".join(names) + "\n")
    return path


def _standard_cases():
    """The seven strategies compared in the parameter sweeps."""
    sca = dict(gamma_policy="coarse", signal="proportional", an="eigen_inverse", xi=0.9)
    return (
        CaseSpec("fixed-g0.8", theta=0, kappa=0.0, gamma_policy="fixed", gamma=0.8),
        CaseSpec("known-an-k0", theta=0, kappa=0.0, **sca),
        CaseSpec("known-an-k0.1", theta=0, kappa=0.1, **sca),
        CaseSpec("unknown-an-k0", theta=1, kappa=0.0, **sca),
        CaseSpec("unknown-an-k0.1", theta=1, kappa=0.1, **sca),
        CaseSpec("g1-k0", theta=0, kappa=0.0, gamma_policy="fixed", gamma=1.0,
                 signal="proportional"),
        CaseSpec("g1-k0.1", theta=0, kappa=0.1, gamma_policy="fixed", gamma=1.0,
                 signal="proportional"),
    )


def builtin_catalog():
    """All named scenarios, keyed by name."""
    far_eve = SystemConfig(pos_eve=(0.5, 5.0))
    # The approximation-vs-simulation comparison needs the residual
    # self-interference off: with it on, the sampled G T G^H term dominates
    # the low-fraction rates and the scalar noise model has nothing to track.
    far_eve_clean = SystemConfig(pos_eve=(0.5, 5.0), eta=0.0)
    default = SystemConfig()
    no_si = SystemConfig(eta=0.0)
    # For the interference sweep the eavesdropper sits a little further out
    # than the default corner; at (1, 1) she shares Bob's unit circle and the
    # coarse stage oscillates between allocation corners as eta grows, which
    # buries the trend the sweep is meant to show.
    eve_east = SystemConfig(pos_eve=(2.0, 1.0))
    eve_line = SystemConfig(pos_eve=(0.0, 5.0))
    gamma_sweep = tuple(round(0.05 * k, 2) for k in range(1, 21))
    xi_sweep = tuple(round(0.1 * k, 1) for k in range(1, 10))
    seven = _standard_cases()

    def hd_cases(scale):
        return (
            CaseSpec("known-an", theta=0, kappa=0.1, hd_baseline=True,
                     hd_error_scale=scale),
            CaseSpec("unknown-an", theta=1, kappa=0.1, hd_baseline=True,
                     hd_error_scale=scale),
        )

    scenarios = (
        Scenario(
            "fig2a", "power_fraction", gamma_sweep,
            (CaseSpec("known-an", theta=0, kappa=0.1),), far_eve_clean,
            description="Monte Carlo rates vs the closed-form approximation, "
                        "artificial noise known to the peers",
        ),
        Scenario(
            "fig2b", "power_fraction", gamma_sweep,
            (CaseSpec("unknown-an", theta=1, kappa=0.1),), far_eve_clean,
            description="Monte Carlo rates vs the closed-form approximation, "
                        "artificial noise unknown",
        ),
        Scenario(
            "fig3", "gamma_grid", (),
            (CaseSpec("known-an", theta=0, kappa=0.1),
             CaseSpec("unknown-an", theta=1, kappa=0.1)),
            far_eve_clean, kind="grid",
            description="approximate secrecy surface and zero-secrecy "
                        "boundaries over the signal-fraction square",
        ),
        Scenario(
            "fig4a", "power_fraction", gamma_sweep, hd_cases(1.0), no_si,
            description="duplex sum secrecy against an alternating-slot "
                        "baseline, equal estimation error",
        ),
        Scenario(
            "fig4b", "power_fraction", gamma_sweep, hd_cases(1.5), no_si,
            description="duplex sum secrecy against an alternating-slot "
                        "baseline with 1.5x its estimation error",
        ),
        Scenario(
            "fig5", "xi", xi_sweep,
            (CaseSpec("min-stream", theta=1, kappa=0.0, gamma_policy="fixed",
                      gamma=0.5, signal="proportional", an="min_stream"),
             CaseSpec("eigen-inverse", theta=1, kappa=0.0, gamma_policy="fixed",
                      gamma=0.5, signal="proportional", an="eigen_inverse")),
            far_eve,
            description="artificial-noise placement policies over the "
                        "signal-space share of the AN budget",
        ),
        Scenario(
            "fig6", "eta", tuple(0.25 * k for k in range(9)), seven, eve_east,
            description="sum secrecy vs residual self-interference gain",
        ),
        Scenario(
            "fig7", "eve_x", tuple(0.5 * k for k in range(11)), seven, eve_line,
            description="sum secrecy vs eavesdropper position along y = 5",
        ),
        Scenario(
            "fig8", "tx_power_db", tuple(5.0 * k for k in range(13)), seven, default,
            description="sum secrecy vs transmit power budget",
        ),
    )
    return {s.name: s for s in scenarios}
