"""Coupled turbine + wake scenario driver on a reduced grid."""

import math

import numpy as np
import pytest

from helixwake.excitation import (ExcitationParams, FlowConditions,
                                  StrategyConfig, excitation_frequency)
from helixwake.rotor import TurbineParams
from helixwake.scenario import (default_window, reference_period,
                                run_comparison, run_strategy)
from helixwake.wake import WakeGridConfig, advection_speed

PARAMS = TurbineParams()
FLOW = FlowConditions()
# small, fast grid: 4 diameters downstream, coarse cross plane
GRID = WakeGridConfig(x_extent=4 * 126.4, nx=32, ny=16, nz=16)
# St 0.4 shortens the forcing period so two-period runs stay cheap
FAST_EXC = ExcitationParams(strouhal=0.4)


def fast_cfg(name="helix-ccw"):
    return StrategyConfig.from_name(name, excitation=FAST_EXC)


def test_reference_period():
    assert reference_period(StrategyConfig(), PARAMS, FLOW) \
        == pytest.approx(126.4 / 8.0, rel=1e-12)
    f_e = excitation_frequency(0.4, FLOW, PARAMS.diameter)
    assert reference_period(fast_cfg(), PARAMS, FLOW) \
        == pytest.approx(1.0 / f_e, rel=1e-12)


def test_default_window_alignment():
    dt = 0.1
    start, duration = default_window(fast_cfg(), PARAMS, FLOW, GRID, dt,
                                     periods=2, settle_periods=1)
    t_ref = reference_period(fast_cfg(), PARAMS, FLOW)
    flush = GRID.x_extent / advection_speed(PARAMS, FLOW)
    assert start == pytest.approx(math.ceil((flush + t_ref) / dt) * dt, abs=1e-9)
    assert duration == pytest.approx(start + math.ceil(2 * t_ref / dt) * dt,
                                     abs=1e-9)
    # both land exactly on the dt grid
    assert abs(start / dt - round(start / dt)) < 1e-9
    assert abs(duration / dt - round(duration / dt)) < 1e-9


def test_run_strategy_snapshots_inside_window():
    run = run_strategy(fast_cfg(), PARAMS, FLOW, GRID, planes=(2, 3),
                       periods=2, snapshots_per_period=8)
    assert np.all(run.snapshot_times >= run.measure_start - 1e-9)
    assert np.all(run.snapshot_times <= run.duration + 1e-9)
    assert set(run.energies) == {2, 3}
    for p in (2, 3):
        trace = run.energies[p]
        assert len(trace) == len(run.snapshot_times)
        assert np.all(trace > 0.0)
        assert run.mean_slices[p].x_over_d == pytest.approx(p)
    # roughly snapshots_per_period per forcing period over two periods
    assert 12 <= len(run.snapshot_times) <= 20
    assert run.series.duration == pytest.approx(run.duration)
    assert run.y_hist is None and run.momentum_hist is None


def test_run_strategy_station_recording():
    run = run_strategy(fast_cfg(), PARAMS, FLOW, GRID, planes=(2,),
                       periods=2, snapshots_per_period=8,
                       record_stations=True)
    n = len(run.snapshot_times)
    assert run.y_hist.shape == (n, GRID.nx)
    assert run.z_hist.shape == (n, GRID.nx)
    assert run.momentum_hist.shape == (n, GRID.nx)
    # a helix run moves the centerline off axis somewhere downstream
    assert np.abs(run.z_hist).max() > 0.0


def test_mean_slice_is_snapshot_average():
    run = run_strategy(fast_cfg(), PARAMS, FLOW, GRID, planes=(2,),
                       periods=2, snapshots_per_period=8)
    mean = run.mean_slices[2]
    assert mean.u.shape == (GRID.ny, GRID.nz)
    # deficit present: slower than freestream at the center, close to it
    # at the corner of the cross plane
    c = GRID.ny // 2
    assert mean.u[c, c] < 0.9 * FLOW.wind_speed
    assert mean.u[0, 0] > 0.99 * FLOW.wind_speed


def test_run_strategy_rejects_bad_window():
    with pytest.raises(ValueError):
        run_strategy(fast_cfg(), PARAMS, FLOW, GRID, planes=(2,),
                     duration=10.0)


def test_run_strategy_rejects_far_plane():
    with pytest.raises(ValueError):
        run_strategy(fast_cfg(), PARAMS, FLOW, GRID, planes=(5,), periods=2)


def test_run_comparison_adds_baseline_and_shares_window():
    runs = run_comparison({"helix-ccw": fast_cfg()}, PARAMS, FLOW, GRID,
                          planes=(2, 3), periods=2, snapshots_per_period=8)
    assert set(runs) == {"helix-ccw", "baseline"}
    base, helix = runs["baseline"], runs["helix-ccw"]
    assert base.measure_start == helix.measure_start
    assert len(base.series) == len(helix.series)
    # snapshot cadence follows each strategy's own reference period, but
    # every sample stays inside the shared measurement window
    for run in (base, helix):
        assert np.all(run.snapshot_times >= run.measure_start - 1e-9)
        assert np.all(run.snapshot_times <= run.duration + 1e-9)
    # the forced wake carries more energy to the probe than the steady one
    assert helix.energies[3].mean() > base.energies[3].mean()


def test_run_comparison_rejects_short_duration():
    with pytest.raises(ValueError):
        run_comparison({"helix-ccw": fast_cfg()}, PARAMS, FLOW, GRID,
                       planes=(2,), periods=2, duration=5.0)
