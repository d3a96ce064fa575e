"""Coupled turbine + wake scenario driver.

Runs the pitch schedule, feeds the resulting hub loads through the wake
model, and collects the slice-based energy traces the report needs.  The
coupling is one-way: a single turbine in uniform inflow, so the wake never
feeds back on the rotor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import streamtube_energy
from .excitation import DYNAMIC_KINDS, FlowConditions, StrategyConfig, excitation_frequency
from .rotor import TurbineParams, TurbineTimeSeries, simulate_turbine
from .wake import (SliceField, TurbineSample, WakeGridConfig, WakeModelParams,
                   WakeState, advection_speed, extract_slice, init_wake,
                   momentum_deficit_integral, step_wake)


@dataclass
class StrategyRun:
    """Everything one strategy run produces for analysis.

    ``energies[p]`` is the streamtube energy trace [W] at plane p rotor
    diameters downstream, sampled at ``snapshot_times`` (all inside the
    measurement window).  ``mean_slices[p]`` is the time-mean velocity
    field over the same window.
    """

    name: str
    cfg: StrategyConfig
    series: TurbineTimeSeries
    measure_start: float
    duration: float
    snapshot_times: np.ndarray
    energies: dict[int, np.ndarray]
    mean_slices: dict[int, SliceField]
    final_state: WakeState
    # optional per-snapshot station histories (criteria diagnostics)
    y_hist: np.ndarray | None = None
    z_hist: np.ndarray | None = None
    momentum_hist: np.ndarray | None = None


def reference_period(cfg: StrategyConfig, params: TurbineParams,
                     flow: FlowConditions) -> float:
    """Forcing period for excited strategies, else the advective time D/U."""
    if cfg.kind in DYNAMIC_KINDS:
        f_e = excitation_frequency(cfg.excitation.strouhal, flow, params.diameter)
        if f_e > 0.0:
            return 1.0 / f_e
    return params.diameter / flow.wind_speed


def default_window(cfg: StrategyConfig, params: TurbineParams, flow: FlowConditions,
                   grid: WakeGridConfig, dt: float, periods: int = 10,
                   settle_periods: int = 1) -> tuple[float, float]:
    """(measure_start, duration) [s] for a run, aligned to the dt grid.

    Measurement starts after one full advective flush of the station line
    plus ``settle_periods`` forcing periods, and spans ``periods`` forcing
    periods.
    """
    t_ref = reference_period(cfg, params, flow)
    flush = grid.x_extent / advection_speed(params, flow)
    measure_start = math.ceil((flush + settle_periods * t_ref) / dt) * dt
    duration = measure_start + math.ceil(periods * t_ref / dt) * dt
    return measure_start, duration


def run_strategy(cfg: StrategyConfig,
                 params: TurbineParams | None = None,
                 flow: FlowConditions | None = None,
                 grid: WakeGridConfig | None = None,
                 model: WakeModelParams | None = None,
                 dt: float = 0.1,
                 planes: tuple[int, ...] = (3, 5, 7),
                 periods: int = 10,
                 settle_periods: int = 1,
                 snapshots_per_period: int = 64,
                 duration: float | None = None,
                 measure_start: float | None = None,
                 record_stations: bool = False,
                 energy_exponent: int = 3) -> StrategyRun:
    """Simulate one strategy end to end and collect its energy accounting.

    Parameters
    ----------
    cfg : StrategyConfig
    params, flow, grid, model : model configuration; defaults when omitted.
    dt : float
        Shared turbine/wake step [s].
    planes : tuple of int
        Downstream probe planes in rotor diameters.
    periods, settle_periods : int
        Measurement span and settling margin in forcing periods (advective
        times for unforced strategies); ignored when ``duration`` and
        ``measure_start`` are given explicitly.
    snapshots_per_period : int
        Energy sampling density within one forcing period.
    record_stations : bool
        Also record per-snapshot centerline and momentum-integral station
        arrays (used by the wake-kinematics checks; off by default to keep
        memory down).

    Returns
    -------
    StrategyRun
    """
    params = params or TurbineParams()
    flow = flow or FlowConditions()
    grid = grid or WakeGridConfig()
    model = model or WakeModelParams()
    t_ref = reference_period(cfg, params, flow)
    auto_start, auto_duration = default_window(cfg, params, flow, grid, dt,
                                               periods, settle_periods)
    if measure_start is None:
        measure_start = auto_start
    if duration is None:
        duration = auto_duration
    if duration <= measure_start:
        raise ValueError("duration %g s must exceed measure_start %g s"
                         % (duration, measure_start))
    for p in planes:
        if p * params.diameter > grid.x_extent + 1e-9:
            raise ValueError("probe plane %gD lies beyond the wake extent" % p)

    series = simulate_turbine(cfg, params, flow, duration, dt)
    state = init_wake(grid, params, flow, model, dt, mixing_window=t_ref)
    stride = max(1, int(round(t_ref / (snapshots_per_period * dt))))

    plane_x = {p: p * params.diameter for p in planes}
    energies = {p: [] for p in planes}
    sums = {p: None for p in planes}
    times = []
    y_hist, z_hist, mom_hist = [], [], []

    n = len(series)
    for i in range(n - 1):
        step_wake(state, TurbineSample.from_series(series, i), dt)
        j = i + 1
        if j % stride != 0:
            continue
        t_j = series.t[j]
        if t_j < measure_start - 1e-9:
            continue
        times.append(t_j)
        for p in planes:
            slc = extract_slice(state, plane_x[p])
            energies[p].append(streamtube_energy(slc, flow, params,
                                                 exponent=energy_exponent))
            sums[p] = slc.u.copy() if sums[p] is None else sums[p] + slc.u
        if record_stations:
            y_hist.append(state.y_c.copy())
            z_hist.append(state.z_c.copy())
            mom_hist.append(momentum_deficit_integral(state))

    if not times:
        raise ValueError("no snapshots inside the measurement window; "
                         "check duration/measure_start")
    mean_slices = {}
    for p in planes:
        ref = extract_slice(state, plane_x[p])
        mean_slices[p] = SliceField(x_over_d=ref.x_over_d, y=ref.y, z=ref.z,
                                    u=sums[p] / len(times))
    return StrategyRun(
        name=cfg.name, cfg=cfg, series=series, measure_start=float(measure_start),
        duration=float(duration), snapshot_times=np.array(times),
        energies={p: np.array(v) for p, v in energies.items()},
        mean_slices=mean_slices, final_state=state,
        y_hist=np.array(y_hist) if record_stations else None,
        z_hist=np.array(z_hist) if record_stations else None,
        momentum_hist=np.array(mom_hist) if record_stations else None)


def run_comparison(strategies: dict[str, StrategyConfig],
                   params: TurbineParams | None = None,
                   flow: FlowConditions | None = None,
                   grid: WakeGridConfig | None = None,
                   model: WakeModelParams | None = None,
                   dt: float = 0.1,
                   planes: tuple[int, ...] = (3, 5, 7),
                   periods: int = 10,
                   settle_periods: int = 1,
                   snapshots_per_period: int = 64,
                   duration: float | None = None) -> dict[str, StrategyRun]:
    """Run several strategies on a common time window for a fair report.

    A baseline entry is added if missing.  The shared window is the widest
    one any requested strategy needs (or the explicit ``duration``).
    """
    params = params or TurbineParams()
    flow = flow or FlowConditions()
    grid = grid or WakeGridConfig()
    strategies = dict(strategies)
    if "baseline" not in strategies:
        strategies["baseline"] = StrategyConfig()
    starts, durations = zip(*(default_window(cfg, params, flow, grid, dt,
                                             periods, settle_periods)
                              for cfg in strategies.values()))
    measure_start = max(starts)
    common_duration = duration if duration is not None else max(durations)
    if common_duration <= measure_start:
        raise ValueError("duration %g s must exceed the spin-up %g s"
                         % (common_duration, measure_start))
    runs = {}
    for name, cfg in strategies.items():
        runs[name] = run_strategy(
            cfg, params, flow, grid, model, dt=dt, planes=planes,
            snapshots_per_period=snapshots_per_period,
            duration=common_duration, measure_start=measure_start)
    return runs
