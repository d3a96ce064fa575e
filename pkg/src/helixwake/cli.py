"""Command line interface.

Subcommands: run (one strategy, time series + mean slices), compare
(strategy table against baseline), sweep (Strouhal/amplitude grid), slice
(cross-plane grid file + heatmap).  Every output embeds the resolved
configuration hash in a comment header.  Exit codes: 0 success, 2 bad
configuration or arguments, 3 simulation failure, 4 file I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from .analysis import build_report
from .config import (ConfigError, config_hash, load_run_config,
                     load_sweep_spec)
from .excitation import StrategyKind
from .scenario import default_window, run_comparison, run_strategy
from .sweep import run_sweep
from .wake import SliceField, extract_slice

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SIMULATION = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helixwake",
        description="Wake-mixing control toolkit: pitch strategies, "
                    "reduced-order wake response, comparisons and sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="YAML run configuration")
        p.add_argument("--out", default=None,
                       help="output directory (overrides the config)")
        p.add_argument("--duration", type=float, default=None,
                       help="simulation length [s] (overrides the config)")
        p.add_argument("--dt", type=float, default=None,
                       help="time step [s] (overrides the config)")

    p_run = sub.add_parser("run", help="simulate one strategy")
    common(p_run)
    p_run.add_argument("--strategy", required=True,
                       help="strategy name, e.g. baseline or helix-ccw")

    p_cmp = sub.add_parser("compare", help="strategy comparison table")
    common(p_cmp)
    p_cmp.add_argument("--strategy", action="append", default=None,
                       help="strategy to include (repeatable; default: "
                            "the config's strategy list)")

    p_swp = sub.add_parser("sweep", help="Strouhal/amplitude grid sweep")
    common(p_swp)
    p_swp.add_argument("spec", help="YAML sweep specification")

    p_slc = sub.add_parser("slice", help="cross-plane velocity slice")
    common(p_slc)
    p_slc.add_argument("--strategy", required=True)
    p_slc.add_argument("--x", type=float, required=True,
                       help="downstream position in rotor diameters")
    p_slc.add_argument("--time-mean", action="store_true",
                       help="time-average over the measurement window "
                            "instead of the final snapshot")
    p_slc.add_argument("--relative", action="store_true",
                       help="subtract the baseline and normalize by the "
                            "free-stream speed")
    return parser


def _apply_overrides(cfg, args):
    updates = {}
    if args.out is not None:
        updates["output_dir"] = args.out
    if args.duration is not None:
        updates["duration"] = args.duration
    if args.dt is not None:
        updates["dt"] = args.dt
    return dataclasses.replace(cfg, **updates) if updates else cfg


def _strategy_config(cfg, name: str):
    try:
        StrategyKind(name)
    except ValueError as exc:
        raise ConfigError("unknown strategy %r (choose from %s)"
                          % (name, ", ".join(k.value for k in StrategyKind))) from exc
    return cfg.strategy_config(name)


def _check_duration(cfg, strategy_cfgs) -> None:
    """Enforce duration >= spin-up + the measurement periods when given."""
    if cfg.duration is None:
        return
    need = max(default_window(scfg, cfg.turbine, cfg.flow, cfg.grid, cfg.dt,
                              cfg.periods, cfg.settle_periods)[1]
               for scfg in strategy_cfgs)
    if cfg.duration < need - 1e-9:
        raise ConfigError("run.duration=%g s is below spin-up plus %d "
                          "measurement periods (%g s)"
                          % (cfg.duration, cfg.periods, need))


def _outdir(cfg) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return cfg.output_dir


def _save_field_heatmap(slc: SliceField, path, label: str,
                        diverging: bool) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    extent = (float(slc.y.min()), float(slc.y.max()),
              float(slc.z.min()), float(slc.z.max()))
    if diverging:
        vmax = max(float(np.max(np.abs(slc.u))), 1e-12)
        im = ax.imshow(slc.u.T, origin="lower", extent=extent,
                       cmap="RdBu_r", vmin=-vmax, vmax=vmax)
    else:
        im = ax.imshow(slc.u.T, origin="lower", extent=extent, cmap="viridis")
    ax.set_xlabel("y [m]")
    ax.set_ylabel("z [m]")
    ax.set_title("x = %gD" % slc.x_over_d)
    fig.colorbar(im, ax=ax, label=label)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _save_sweep_heatmap(result, path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    spec = result.spec
    grid = result.objective_grid()
    fig, ax = plt.subplots(figsize=(6.5, 5.0))
    vmax = float(np.nanmax(np.abs(grid))) if np.isfinite(grid).any() else 1.0
    vmax = max(vmax, 1e-12)

    def bounds(lo, hi, count):
        # cell-centered extent; degenerate axes get a token half-width
        half = 0.5 * (hi - lo) / (count - 1) if count > 1 else max(0.1 * abs(lo), 0.05)
        return lo - half, hi + half

    a_lo, a_hi = bounds(spec.amp_min, spec.amp_max, spec.amp_count)
    s_lo, s_hi = bounds(spec.st_min, spec.st_max, spec.st_count)
    im = ax.imshow(grid, origin="lower", aspect="auto", cmap="RdBu_r",
                   vmin=-vmax, vmax=vmax, extent=(a_lo, a_hi, s_lo, s_hi))
    ax.set_xlabel("amplitude [deg]")
    ax.set_ylabel("Strouhal number")
    ax.set_title("%s, objective %s" % (spec.strategy.value, spec.objective))
    fig.colorbar(im, ax=ax, label="objective [%]")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _cmd_run(cfg, args) -> int:
    scfg = _strategy_config(cfg, args.strategy)
    _check_duration(cfg, [scfg])
    max_plane = int(cfg.grid.x_extent / cfg.turbine.diameter + 1e-9)
    planes = tuple(range(1, min(7, max_plane) + 1))
    run = run_strategy(scfg, cfg.turbine, cfg.flow, cfg.grid, cfg.wake,
                       dt=cfg.dt, planes=planes, periods=cfg.periods,
                       settle_periods=cfg.settle_periods,
                       snapshots_per_period=cfg.snapshots_per_period,
                       duration=cfg.duration)
    out = _outdir(cfg)
    tag = config_hash(cfg)
    comments = ("config=%s" % tag, "strategy=%s" % args.strategy)
    ts_path = os.path.join(out, "%s_timeseries.csv" % args.strategy)
    run.series.to_csv(ts_path, header_comments=comments)
    written = [ts_path]
    for p in planes:
        path = os.path.join(out, "%s_slice_%gd.txt" % (args.strategy, p))
        run.mean_slices[p].to_text(
            path, header_comments=comments + ("time-mean over [%g, %g] s"
                                              % (run.measure_start, run.duration),))
        written.append(path)
    for path in written:
        print("wrote %s" % path)
    return EXIT_OK


def _cmd_compare(cfg, args) -> int:
    names = list(args.strategy) if args.strategy else list(cfg.strategies)
    seen = []
    for n in names:
        if n not in seen:
            seen.append(n)
    if len(cfg.planes) != 3:
        raise ConfigError("run.planes must list exactly three planes for "
                          "the comparison table, got %r" % (cfg.planes,))
    strategy_cfgs = {n: _strategy_config(cfg, n) for n in seen}
    _check_duration(cfg, list(strategy_cfgs.values()))
    runs = run_comparison(strategy_cfgs, cfg.turbine, cfg.flow, cfg.grid,
                          cfg.wake, dt=cfg.dt, planes=cfg.planes,
                          periods=cfg.periods,
                          settle_periods=cfg.settle_periods,
                          snapshots_per_period=cfg.snapshots_per_period,
                          duration=cfg.duration)
    report = build_report(runs, planes=cfg.planes)
    out = _outdir(cfg)
    tag = config_hash(cfg)
    comments = ("config=%s" % tag,
                "strategies=%s" % ",".join(sorted(runs)))
    csv_path = os.path.join(out, "comparison.csv")
    report.to_csv(csv_path, header_comments=comments)
    txt_path = os.path.join(out, "comparison.txt")
    with open(txt_path, "w") as fh:
        for line in comments:
            fh.write("# %s\n" % line)
        fh.write(report.to_text())
    print("wrote %s" % csv_path)
    print("wrote %s" % txt_path)
    print(report.to_text(), end="")
    return EXIT_OK


def _cmd_sweep(cfg, args) -> int:
    spec = load_sweep_spec(args.spec)
    result = run_sweep(spec, cfg.turbine, cfg.flow, cfg.grid, cfg.wake,
                       dt=cfg.dt, periods=cfg.periods,
                       settle_periods=cfg.settle_periods,
                       snapshots_per_period=min(cfg.snapshots_per_period, 16))
    out = _outdir(cfg)
    csv_path = os.path.join(out, "sweep.csv")
    with open(csv_path, "w") as fh:
        fh.write("# config=%s sweep_spec=%s\n"
                 % (config_hash(cfg), config_hash(spec)))
        fh.write(result.to_csv())
    png_path = os.path.join(out, "sweep.png")
    _save_sweep_heatmap(result, png_path)
    print("wrote %s" % csv_path)
    print("wrote %s" % png_path)
    best = result.ranking()[0]
    if best.status == "ok":
        print("best: St=%g amplitude=%g deg -> %s=%.3f"
              % (best.st, best.amplitude, spec.objective, best.objective))
    else:
        print("no grid point succeeded; see the status column")
    return EXIT_OK


def _cmd_slice(cfg, args) -> int:
    scfg = _strategy_config(cfg, args.strategy)
    x = args.x * cfg.turbine.diameter
    if not 0.0 < x <= cfg.grid.x_extent + 1e-9:
        raise ConfigError("--x=%g D is outside the wake extent (0, %g D]"
                          % (args.x, cfg.grid.x_extent / cfg.turbine.diameter))
    _check_duration(cfg, [scfg])
    plane = float(args.x)
    if args.relative:
        runs = run_comparison({args.strategy: scfg}, cfg.turbine, cfg.flow,
                              cfg.grid, cfg.wake, dt=cfg.dt, planes=(plane,),
                              periods=cfg.periods,
                              settle_periods=cfg.settle_periods,
                              snapshots_per_period=cfg.snapshots_per_period,
                              duration=cfg.duration)
        run, base = runs[args.strategy], runs["baseline"]
        if args.time_mean:
            u_s = run.mean_slices[plane].u
            u_b = base.mean_slices[plane].u
            ref = run.mean_slices[plane]
        else:
            s_s = extract_slice(run.final_state, x)
            s_b = extract_slice(base.final_state, x)
            u_s, u_b, ref = s_s.u, s_b.u, s_s
        field = SliceField(x_over_d=ref.x_over_d, y=ref.y, z=ref.z,
                           u=(u_s - u_b) / cfg.flow.wind_speed)
        label = "(u - u_baseline) / U"
    else:
        run = run_strategy(scfg, cfg.turbine, cfg.flow, cfg.grid, cfg.wake,
                           dt=cfg.dt, planes=(plane,), periods=cfg.periods,
                           settle_periods=cfg.settle_periods,
                           snapshots_per_period=cfg.snapshots_per_period,
                           duration=cfg.duration)
        field = (run.mean_slices[plane] if args.time_mean
                 else extract_slice(run.final_state, x))
        label = "u [m/s]"
    out = _outdir(cfg)
    stem = "%s_slice_%gd%s%s" % (args.strategy, args.x,
                                 "_mean" if args.time_mean else "",
                                 "_rel" if args.relative else "")
    comments = ("config=%s" % config_hash(cfg),
                "strategy=%s" % args.strategy,
                "field=%s" % label)
    txt_path = os.path.join(out, stem + ".txt")
    field.to_text(txt_path, header_comments=comments)
    png_path = os.path.join(out, stem + ".png")
    _save_field_heatmap(field, png_path, label, diverging=args.relative)
    print("wrote %s" % txt_path)
    print("wrote %s" % png_path)
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "compare": _cmd_compare, "sweep": _cmd_sweep,
             "slice": _cmd_slice}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_run_config(args.config), args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001 - model errors map to one exit code
        print("simulation error: %s" % exc, file=sys.stderr)
        return EXIT_SIMULATION


if __name__ == "__main__":
    sys.exit(main())
