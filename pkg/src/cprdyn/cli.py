"""Command-line entry points.

Seven subcommands, one per experiment class:

    ode           deterministic trajectory sampled at integer times
    abm           one stochastic realization
    ensemble      independent realizations with mean and standard error
    compare       ode + ensemble on shared times, with gap series
    density       terminal-state grid over initial conditions
    critical-map  analytic threshold over the extraction-parameter plane
    equilibria    fixed points with stability and eigenvalues

Configuration comes from an INI file (--config) with command-line flags
overriding individual keys; the fully resolved union is recorded in the
metadata JSON written next to the results. Exit codes: 0 success, 1 usage or
configuration error, 2 computation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__, kernels
from .abm import run_ensemble, run_realization
from .config import ConfigError, RunConfig, build_config, _resolve, _parse_raw
from .equilibria import critical_value, stationary_solutions
from .formats import (
    write_critical_map,
    write_density,
    write_metadata,
    write_series,
    write_table,
)
from .models import GREED_NAMES_DOC
from .ode import IntegrationError, integrate_terminal_state, sample_trajectory
from .sweep import compare_ode_abm, critical_map, density_sweep, empirical_critical

RNG_NAME = "xoshiro256** (splitmix64-seeded, index-derived streams)"

USAGE_ERROR = 1
COMPUTATION_ERROR = 2
IO_ERROR = 3

# flag -> (section, key); every flag simply overrides one config key
_FLAG_MAP = {
    "model": ("model", "family"),
    "T": ("model", "growth_rate"),
    "ec": ("model", "ec"),
    "ed": ("model", "ed"),
    "w": ("model", "w"),
    "c": ("model", "c"),
    "a": ("model", "a"),
    "qa": ("model", "qa"),
    "qb": ("model", "qb"),
    "qc": ("model", "qc"),
    "qd": ("model", "qd"),
    "qe": ("model", "qe"),
    "step_size": ("integrator", "step_size"),
    "max_time": ("integrator", "max_time"),
    "steady_tol": ("integrator", "steady_tol"),
    "window": ("integrator", "window"),
    "depletion_floor": ("integrator", "depletion_floor"),
    "n_players": ("abm", "n_players"),
    "seed": ("abm", "seed"),
    "t_end": ("abm", "t_end"),
    "r0": ("abm", "r0"),
    "x0": ("abm", "x0"),
    "net": ("abm", "network"),
    "ba_m": ("abm", "ba_m"),
    "sw_k": ("abm", "sw_k"),
    "sw_beta": ("abm", "sw_beta"),
    "realizations": ("sweep", "realizations"),
    "out": ("output", "directory"),
    "name": ("output", "name"),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cprdyn",
        description="Coupled resource-extraction and cooperation dynamics.",
        epilog=GREED_NAMES_DOC,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "command",
        choices=["ode", "abm", "ensemble", "compare", "density", "critical-map", "equilibria"],
    )
    parser.add_argument("--config", help="INI configuration file")
    parser.add_argument("--model", help="greed family name")
    parser.add_argument("--T", help="resource growth rate")
    parser.add_argument("--ec", help="normalized cooperator extraction, in (0,1)")
    parser.add_argument("--ed", help="normalized defector extraction, > 1")
    parser.add_argument("--w", help="constant greed value (minimal family)")
    parser.add_argument("--c", help="blend weight (resource_conformity family)")
    parser.add_argument("--a", help="quadratic shape (single-driver quadratics)")
    for q in ("qa", "qb", "qc", "qd", "qe"):
        parser.add_argument(f"--{q}", help="blended quadratic coefficient")
    parser.add_argument("--step-size", dest="step_size")
    parser.add_argument("--max-time", dest="max_time")
    parser.add_argument("--steady-tol", dest="steady_tol")
    parser.add_argument("--window", dest="window")
    parser.add_argument("--depletion-floor", dest="depletion_floor")
    parser.add_argument("--n-players", dest="n_players")
    parser.add_argument("--seed")
    parser.add_argument("--t-end", dest="t_end")
    parser.add_argument("--r0")
    parser.add_argument("--x0")
    parser.add_argument("--net", help="complete | ba | sw")
    parser.add_argument("--ba-m", dest="ba_m")
    parser.add_argument("--sw-k", dest="sw_k")
    parser.add_argument("--sw-beta", dest="sw_beta")
    parser.add_argument("--realizations")
    parser.add_argument("--grid", help="density lattice as POINTSxPOINTS, e.g. 101x101")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--name", help="file name prefix")
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    text = ""
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
    raw = _parse_raw(text)
    for flag, (section, key) in _FLAG_MAP.items():
        value = getattr(args, flag, None)
        if value is not None:
            raw.setdefault(section, {})[key] = value
    if args.grid:
        try:
            r_pts, x_pts = args.grid.lower().split("x")
            int(r_pts), int(x_pts)
        except ValueError as exc:
            raise ConfigError(f"--grid expects POINTSxPOINTS, got {args.grid!r}") from exc
        raw.setdefault("sweep", {})["r0_points"] = r_pts
        raw.setdefault("sweep", {})["x0_points"] = x_pts
    return build_config(_resolve(raw))


# ---------------------------------------------------------------------------
# Subcommands; each returns the list of files written
# ---------------------------------------------------------------------------


def _series_rows_from_runs(ens) -> list[tuple[float, str, float, float]]:
    rows = []
    for r in range(ens.n_realizations):
        tag = f"run{r:03d}"
        for t, value in zip(ens.times, ens.resource_runs[r]):
            rows.append((float(t), f"R_{tag}", float(value), 0.0))
        for t, value in zip(ens.times, ens.coop_runs[r]):
            rows.append((float(t), f"x_{tag}", float(value), 0.0))
    return rows


def _cmd_ode(config: RunConfig, out: Path, meta: dict) -> list[str]:
    traj = sample_trajectory(
        config.model,
        config.abm.initial,
        float(config.abm.t_end),
        sample_dt=1.0,
        step_size=config.integrator.step_size,
    )
    state, terminal, t_reached = integrate_terminal_state(
        config.model, config.abm.initial, config.integrator
    )
    meta["terminal"] = {
        "flag": terminal.value,
        "time": t_reached,
        "resource": state.resource,
        "coop_fraction": state.coop_fraction,
    }
    rows = []
    for t, r in zip(traj.times, traj.resource):
        rows.append((float(t), "R_ode", float(r), 0.0))
    for t, x in zip(traj.times, traj.coop_fraction):
        rows.append((float(t), "x_ode", float(x), 0.0))
    path = str(out / f"{config.name}.series.csv")
    write_series(path, rows)
    return [path]


def _cmd_abm(config: RunConfig, out: Path, meta: dict) -> list[str]:
    run = run_realization(config.abm, config.model)
    meta["final"] = {"resource": run.resource, "coop_fraction": run.coop_fraction}
    rows = []
    for t, r in zip(run.times, run.resource_series):
        rows.append((float(t), "R_run000", float(r), 0.0))
    for t, x in zip(run.times, run.coop_series):
        rows.append((float(t), "x_run000", float(x), 0.0))
    path = str(out / f"{config.name}.series.csv")
    write_series(path, rows)
    return [path]


def _cmd_ensemble(config: RunConfig, out: Path, meta: dict) -> list[str]:
    ens = run_ensemble(config.abm, config.model, config.realizations)
    meta["realization_seeds"] = list(ens.seeds)
    rows = _series_rows_from_runs(ens)
    for t, m, s in zip(ens.times, ens.resource_mean, ens.resource_stderr):
        rows.append((float(t), "R_mean", float(m), float(s)))
    for t, m, s in zip(ens.times, ens.coop_mean, ens.coop_stderr):
        rows.append((float(t), "x_mean", float(m), float(s)))
    path = str(out / f"{config.name}.series.csv")
    write_series(path, rows)
    return [path]


def _cmd_compare(config: RunConfig, out: Path, meta: dict) -> list[str]:
    bundle = compare_ode_abm(
        config.model,
        config.abm,
        config.realizations,
        step_size=config.integrator.step_size,
    )
    meta["realization_seeds"] = list(bundle.ensemble.seeds)
    meta["max_gap"] = {
        "resource": bundle.max_resource_gap,
        "coop_fraction": bundle.max_coop_gap,
    }
    ens = bundle.ensemble
    rows = _series_rows_from_runs(ens)
    for t, v in zip(bundle.times, bundle.ode_resource):
        rows.append((float(t), "R_ode", float(v), 0.0))
    for t, v in zip(bundle.times, bundle.ode_coop):
        rows.append((float(t), "x_ode", float(v), 0.0))
    for t, m, s in zip(ens.times, ens.resource_mean, ens.resource_stderr):
        rows.append((float(t), "R_mean", float(m), float(s)))
    for t, m, s in zip(ens.times, ens.coop_mean, ens.coop_stderr):
        rows.append((float(t), "x_mean", float(m), float(s)))
    for t, v in zip(bundle.times, bundle.resource_gap):
        rows.append((float(t), "R_gap", float(v), 0.0))
    for t, v in zip(bundle.times, bundle.coop_gap):
        rows.append((float(t), "x_gap", float(v), 0.0))
    path = str(out / f"{config.name}.series.csv")
    write_series(path, rows)
    return [path]


def _cmd_density(config: RunConfig, out: Path, meta: dict) -> list[str]:
    density = density_sweep(config.model, config.grid, config.integrator)
    empirical = empirical_critical(density)
    analytic = critical_value(config.model)
    meta["empirical_critical"] = empirical.value
    meta["n_unresolved"] = empirical.n_unresolved
    meta["analytic_critical"] = {
        "value": analytic.value,
        "model": analytic.model_tag,
        "region": analytic.region.value,
        "note": analytic.note,
    }
    return write_density(str(out), config.name, density)


def _cmd_critical_map(config: RunConfig, out: Path, meta: dict) -> list[str]:
    cmap = critical_map(
        config.model.greed,
        ec_points=config.map_ec_points,
        ed_points=config.map_ed_points,
        ec_range=config.map_ec_range,
        ed_range=config.map_ed_range,
        growth_rate=config.model.growth_rate,
    )
    meta["region_boundary"] = {"slope": cmap.boundary[0], "intercept": cmap.boundary[1]}
    return write_critical_map(str(out), config.name, cmap)


def _cmd_equilibria(config: RunConfig, out: Path, meta: dict) -> list[str]:
    solutions = stationary_solutions(config.model)
    analytic = critical_value(config.model)
    meta["enumeration_complete"] = solutions.complete
    meta["analytic_critical"] = {
        "value": analytic.value,
        "model": analytic.model_tag,
        "region": analytic.region.value,
        "note": analytic.note,
    }
    rows = []
    for eq in solutions:
        rows.append(
            (
                eq.family or "point",
                eq.state.resource,
                eq.state.coop_fraction,
                eq.classification.value,
                eq.eigenvalues[0].real,
                eq.eigenvalues[0].imag,
                eq.eigenvalues[1].real,
                eq.eigenvalues[1].imag,
                "yes" if eq.existence_condition_met else "no",
            )
        )
    path = str(out / f"{config.name}.equilibria.csv")
    write_table(
        path,
        [
            "family",
            "resource",
            "coop_fraction",
            "classification",
            "eig1_re",
            "eig1_im",
            "eig2_re",
            "eig2_im",
            "exists",
        ],
        rows,
    )
    return [path]


_COMMANDS = {
    "ode": _cmd_ode,
    "abm": _cmd_abm,
    "ensemble": _cmd_ensemble,
    "compare": _cmd_compare,
    "density": _cmd_density,
    "critical-map": _cmd_critical_map,
    "equilibria": _cmd_equilibria,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else USAGE_ERROR

    try:
        config = _load_config(args)
    except ConfigError as exc:
        print(f"cprdyn: configuration error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    out = Path(config.out_dir)
    started = time.time()
    meta: dict = {
        "command": args.command,
        "config": config.resolved,
        "seed": config.abm.seed,
        "rng": RNG_NAME,
        "kernel_backend": kernels.BACKEND,
        "version": __version__,
    }
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = _COMMANDS[args.command](config, out, meta)
    except (IntegrationError, ValueError, RuntimeError) as exc:
        print(f"cprdyn: computation error: {exc}", file=sys.stderr)
        return COMPUTATION_ERROR
    except OSError as exc:
        print(f"cprdyn: i/o error: {exc}", file=sys.stderr)
        return IO_ERROR

    meta["files"] = [Path(p).name for p in written]
    meta["wall_clock_s"] = time.time() - started
    meta["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    try:
        write_metadata(str(out / f"{config.name}.meta.json"), meta)
    except OSError as exc:
        print(f"cprdyn: i/o error: {exc}", file=sys.stderr)
        return IO_ERROR
    for p in written:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
