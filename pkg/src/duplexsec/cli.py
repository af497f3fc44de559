"""Command line front end: run catalog scenarios or a custom sweep.

Custom sweeps come from INI files with three sections. ``[scenario]``
names the sweep (``id``, ``sweep_variable``, ``sweep_values``);
``[base]`` overrides any system parameter by field name; ``[policy]``
sets the transmission strategy (gamma, signal and AN policies, xi,
theta, kappa, the half-duplex baseline switch).
"""

import argparse
import configparser
import os
import sys

from .channel import SystemConfig
from .experiments import (
    AN_POLICIES,
    SIGNAL_POLICIES,
    SWEEP_VARIABLES,
    CaseSpec,
    Scenario,
    apply_case,
    apply_sweep,
    builtin_catalog,
    run_and_write,
    write_manifest,
)


class ConfigError(Exception):
    """Malformed or contradictory sweep configuration."""


_INT_FIELDS = {"n_alice", "n_bob", "n_eve", "b", "theta", "trials", "seed"}
_PAIR_FIELDS = {"pos_alice", "pos_bob", "pos_eve"}


def _parse_pair(text):
    parts = text.replace(",", " ").split()
    if len(parts) != 2:
        raise ConfigError(f"expected two coordinates, got {text!r}")
    return (float(parts[0]), float(parts[1]))


def _parse_base(parser):
    overrides = {}
    if not parser.has_section("base"):
        return SystemConfig()
    for key, text in parser["base"].items():
        if key not in SystemConfig.__dataclass_fields__:
            raise ConfigError(f"unknown base field {key!r}")
        try:
            if key in _PAIR_FIELDS:
                overrides[key] = _parse_pair(text)
            elif key in _INT_FIELDS:
                overrides[key] = int(text)
            else:
                overrides[key] = float(text)
        except ValueError:
            raise ConfigError(f"bad value for base field {key!r}: {text!r}") from None
    try:
        return SystemConfig(**overrides)
    except ValueError as exc:
        raise ConfigError(f"bad base config: {exc}") from None


def _parse_policy(parser, base):
    if not parser.has_section("policy"):
        parser.add_section("policy")
    pol = parser["policy"]
    try:
        theta = pol.getint("theta", fallback=base.theta)
        kappa = pol.getfloat("kappa", fallback=base.kappa_a)
        xi = pol.getfloat("xi", fallback=None)
        hd_baseline = pol.getboolean("hd_baseline", fallback=False)
        hd_error_scale = pol.getfloat("hd_error_scale", fallback=1.0)
    except ValueError as exc:
        raise ConfigError(f"bad policy value: {exc}") from None
    gamma_text = pol.get("gamma", "coarse")
    if gamma_text == "coarse":
        gamma_policy, gamma = "coarse", None
    else:
        try:
            gamma = float(gamma_text)
        except ValueError:
            raise ConfigError(
                f"gamma must be 'coarse' or a number, got {gamma_text!r}"
            ) from None
        if not 0.0 <= gamma <= 1.0:
            raise ConfigError(f"gamma must lie in [0, 1], got {gamma}")
        gamma_policy = "fixed"
    signal = pol.get("signal", "equal")
    if signal not in SIGNAL_POLICIES:
        raise ConfigError(
            f"signal must be one of {', '.join(SIGNAL_POLICIES)}, got {signal!r}"
        )
    an = pol.get("an", "uniform")
    if an not in AN_POLICIES:
        raise ConfigError(f"an must be one of {', '.join(AN_POLICIES)}, got {an!r}")
    if xi is not None and not 0.0 <= xi <= 1.0:
        raise ConfigError(f"xi must lie in [0, 1], got {xi}")
    if hd_error_scale < 0.0:
        raise ConfigError(f"hd_error_scale must be nonnegative, got {hd_error_scale}")
    return CaseSpec(
        label=pol.get("label", "custom"),
        theta=theta,
        kappa=kappa,
        gamma_policy=gamma_policy,
        gamma=gamma,
        signal=signal,
        an=an,
        xi=xi,
        hd_baseline=hd_baseline,
        hd_error_scale=hd_error_scale,
    )


def load_scenario_config(path):
    """Parse an INI sweep definition into a single-case Scenario."""
    parser = configparser.ConfigParser()
    try:
        read = parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path!r}: {exc}") from None
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    if not parser.has_section("scenario"):
        raise ConfigError("config needs a [scenario] section")
    sc = parser["scenario"]
    name = sc.get("id", "").strip()
    if not name:
        raise ConfigError("[scenario] id is required")
    variable = sc.get("sweep_variable", "")
    if variable not in SWEEP_VARIABLES:
        raise ConfigError(
            f"sweep_variable must be one of {', '.join(SWEEP_VARIABLES)}, "
            f"got {variable!r}"
        )
    raw = sc.get("sweep_values", "")
    try:
        values = tuple(float(p) for p in raw.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"bad sweep_values: {raw!r}") from None
    if not values:
        raise ConfigError("[scenario] sweep_values must list at least one number")
    if variable in ("power_fraction", "xi") and not all(0.0 <= v <= 1.0 for v in values):
        raise ConfigError(f"{variable} sweep values must lie in [0, 1]")

    base = _parse_base(parser)
    case = _parse_policy(parser, base)
    if case.gamma_policy == "fixed" and case.gamma is None:
        raise ConfigError("fixed gamma policy needs a value")

    # Force every sweep point through the config validator now rather
    # than crashing mid-run.
    try:
        for value in values:
            apply_sweep(apply_case(base, case), variable, value)
    except ValueError as exc:
        raise ConfigError(f"sweep point rejected: {exc}") from None

    return Scenario(
        name=name,
        sweep_variable=variable,
        sweep_values=values,
        cases=(case,),
        base=base,
        description=f"custom sweep from {os.path.basename(path)}",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="duplexsec",
        description="secrecy-rate sweeps for a two-way full-duplex wiretap link",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run scenarios and write CSV tables")
    run_p.add_argument("--scenario", metavar="ID", help="one catalog scenario")
    run_p.add_argument("--all", action="store_true", help="every catalog scenario")
    run_p.add_argument("--config", metavar="FILE", help="INI file with a custom sweep")
    run_p.add_argument("--seed", type=int, default=0, help="Monte Carlo seed (default 0)")
    run_p.add_argument("--trials", type=int, default=100,
                       help="draws per sweep point (default 100)")
    run_p.add_argument("--out", metavar="DIR", default="results",
                       help="output directory (default results)")

    sub.add_parser("list", help="list catalog scenarios")

    val_p = sub.add_parser("validate", help="check a sweep config file")
    val_p.add_argument("--config", metavar="FILE", required=True)
    return parser


def _cmd_run(args):
    picked = int(args.all) + int(args.scenario is not None) + int(args.config is not None)
    if picked != 1:
        print("choose exactly one of --all, --scenario, --config", file=sys.stderr)
        return 2
    if args.trials < 1:
        print("--trials must be at least 1", file=sys.stderr)
        return 2
    catalog = builtin_catalog()
    if args.all:
        scenarios = list(catalog.values())
    elif args.scenario is not None:
        if args.scenario not in catalog:
            print(
                f"unknown scenario {args.scenario!r}; 'duplexsec list' shows the catalog",
                file=sys.stderr,
            )
            return 2
        scenarios = [catalog[args.scenario]]
    else:
        try:
            scenarios = [load_scenario_config(args.config)]
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
    os.makedirs(args.out, exist_ok=True)
    names = []
    for scenario in scenarios:
        path, n = run_and_write(scenario, args.out, seed=args.seed, trials=args.trials)
        names.append(scenario.name)
        print(f"wrote {path} ({n} rows)")
    write_manifest(args.out, args.seed, args.trials, names)
    return 0


def _cmd_list():
    for name, scenario in builtin_catalog().items():
        axis = "gamma grid" if scenario.kind == "grid" else scenario.sweep_variable
        labels = ", ".join(c.label for c in scenario.cases)
        print(f"{name}: {scenario.description}")
        print(f"    sweep: {axis}; cases: {labels}")
    return 0


def _cmd_validate(args):
    try:
        scenario = load_scenario_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    print(
        f"ok: scenario {scenario.name!r} sweeps {scenario.sweep_variable} "
        f"over {len(scenario.sweep_values)} values"
    )
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "list":
        return _cmd_list()
    return _cmd_validate(args)


if __name__ == "__main__":
    sys.exit(main())
