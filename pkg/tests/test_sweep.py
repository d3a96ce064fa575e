"""Strouhal / amplitude sweep grid: spec validation, scoring, ranking."""

import math

import numpy as np
import pytest

from helixwake.excitation import (ExcitationParams, FlowConditions,
                                  StrategyConfig, StrategyKind)
from helixwake.rotor import TurbineParams
from helixwake.scenario import run_strategy
from helixwake.sweep import (OBJECTIVES, SweepPoint, SweepResult, SweepSpec,
                             run_sweep, sweep_window, worker_count)
from helixwake.wake import WakeGridConfig

PARAMS = TurbineParams()
FLOW = FlowConditions()
# smallest grid that still reaches the 7D probe plane
GRID = WakeGridConfig(x_extent=7 * 126.4, nx=32, ny=16, nz=16)
FAST = dict(params=PARAMS, flow=FLOW, grid=GRID, dt=0.1, periods=2,
            settle_periods=1, snapshots_per_period=4)


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(strategy="baseline")
    with pytest.raises(ValueError):
        SweepSpec(strategy="sic")
    with pytest.raises(ValueError):
        SweepSpec(objective="power")
    with pytest.raises(ValueError):
        SweepSpec(st_min=0.0, st_max=0.4)
    with pytest.raises(ValueError):
        SweepSpec(st_min=0.5, st_max=0.2)
    with pytest.raises(ValueError):
        SweepSpec(st_min=0.2, st_max=0.4, st_count=1)
    with pytest.raises(ValueError):
        SweepSpec(amp_min=-1.0)
    with pytest.raises(ValueError):
        SweepSpec(amp_count=0)
    with pytest.raises(ValueError):
        SweepSpec(penalty_weight=-0.5)


def test_spec_accepts_single_point_axes():
    spec = SweepSpec(strategy="helix-ccw", st_min=0.25, st_max=0.25,
                     st_count=1, amp_min=2.5, amp_max=2.5, amp_count=1)
    assert spec.strategy is StrategyKind.HELIX_CCW
    assert spec.st_values().tolist() == [0.25]
    assert spec.amp_values().tolist() == [2.5]


def test_spec_axis_endpoints():
    spec = SweepSpec(st_min=0.1, st_max=0.4, st_count=4,
                     amp_min=0.0, amp_max=3.0, amp_count=7)
    st = spec.st_values()
    amp = spec.amp_values()
    assert st[0] == 0.1 and st[-1] == 0.4 and len(st) == 4
    assert amp[0] == 0.0 and amp[-1] == 3.0 and len(amp) == 7
    assert "energy_5d" in OBJECTIVES


def test_worker_count_env_cap(monkeypatch):
    monkeypatch.delenv("HELIXWAKE_THREADS", raising=False)
    assert worker_count(1) == 1
    monkeypatch.setenv("HELIXWAKE_THREADS", "2")
    assert worker_count(100) == 2
    assert worker_count(1) == 1
    monkeypatch.setenv("HELIXWAKE_THREADS", "0")
    with pytest.raises(ValueError):
        worker_count(4)
    monkeypatch.setenv("HELIXWAKE_THREADS", "many")
    with pytest.raises(ValueError):
        worker_count(4)


def test_run_sweep_requires_objective_plane():
    spec = SweepSpec(strategy="helix-ccw", objective="energy_5d")
    with pytest.raises(ValueError):
        run_sweep(spec, planes=(3, 7), **FAST)


def test_single_point_sweep_matches_direct_run(monkeypatch):
    monkeypatch.setenv("HELIXWAKE_THREADS", "1")
    spec = SweepSpec(strategy="helix-ccw", st_min=0.25, st_max=0.25,
                     st_count=1, amp_min=2.5, amp_max=2.5, amp_count=1,
                     objective="energy_5d")
    result = run_sweep(spec, **FAST)
    assert len(result.points) == 1
    point = result.points[0]
    assert point.status == "ok"

    # a direct run scored on the sweep's shared measurement window
    start, duration = sweep_window(spec, PARAMS, FLOW, GRID, dt=0.1,
                                   periods=2, settle_periods=1)
    direct = run_strategy(
        StrategyConfig(kind=StrategyKind.HELIX_CCW,
                       excitation=ExcitationParams(strouhal=0.25, amplitude=2.5)),
        PARAMS, FLOW, GRID, dt=0.1, planes=(3, 5, 7),
        snapshots_per_period=4, measure_start=start, duration=duration)
    expected = 100.0 * (float(np.mean(direct.energies[5]))
                        - result.baseline_energy[5]) / result.baseline_energy[5]
    assert point.objective == pytest.approx(expected, rel=1e-12)
    assert point.energy_5d_delta_pct == point.objective
    assert result.best() is point


def test_zero_amplitude_scores_zero(monkeypatch):
    monkeypatch.setenv("HELIXWAKE_THREADS", "1")
    spec = SweepSpec(strategy="helix-ccw", st_min=0.2, st_max=0.4, st_count=2,
                     amp_min=0.0, amp_max=0.0, amp_count=1,
                     objective="energy_5d")
    result = run_sweep(spec, **FAST)
    assert len(result.points) == 2
    for point in result.points:
        assert point.status == "ok"
        # unforced pitch means a baseline turbine: power matches exactly
        # and the wake energy residual is spin-up noise on a coarse grid
        assert abs(point.power_delta_pct) < 1e-12
        assert abs(point.objective) < 5e-4


def test_doubled_settle_barely_moves_objective(monkeypatch):
    monkeypatch.setenv("HELIXWAKE_THREADS", "1")
    spec = SweepSpec(strategy="helix-ccw", st_min=0.25, st_max=0.25,
                     st_count=1, amp_min=2.5, amp_max=2.5, amp_count=1,
                     objective="energy_5d")
    kwargs = dict(FAST)
    kwargs.pop("settle_periods")
    o1 = run_sweep(spec, settle_periods=1, **kwargs).points[0].objective
    o2 = run_sweep(spec, settle_periods=2, **kwargs).points[0].objective
    assert abs(o2 - o1) < 0.01 * max(1.0, abs(o1))


def _synthetic_result():
    spec = SweepSpec(strategy="helix-ccw", st_min=0.1, st_max=0.3, st_count=2,
                     amp_min=1.0, amp_max=2.0, amp_count=2)
    mk = lambda i, j, st, amp, obj, status="ok": SweepPoint(
        st=st, amplitude=amp, st_index=i, amp_index=j, objective=obj,
        energy_3d_delta_pct=obj, energy_5d_delta_pct=obj,
        energy_7d_delta_pct=obj, power_delta_pct=-1.0, status=status)
    points = (mk(0, 0, 0.1, 1.0, 4.0),
              mk(0, 1, 0.1, 2.0, 9.0),
              mk(1, 0, 0.3, 1.0, 9.0),
              mk(1, 1, 0.3, 2.0, math.nan, status="failed: boom"))
    return SweepResult(spec=spec, points=points,
                       baseline_energy={3: 1e6, 5: 1e6, 7: 1e6},
                       baseline_power=1.8e6)


def test_ranking_orders_and_breaks_ties():
    result = _synthetic_result()
    ranked = result.ranking()
    # ties at 9.0 break toward the smaller amplitude
    assert [(p.st, p.amplitude) for p in ranked] == \
        [(0.3, 1.0), (0.1, 2.0), (0.1, 1.0), (0.3, 2.0)]
    assert ranked[-1].status.startswith("failed")
    assert result.best() is ranked[0]


def test_best_requires_a_successful_point():
    result = _synthetic_result()
    failed = tuple(SweepPoint(st=p.st, amplitude=p.amplitude,
                              st_index=p.st_index, amp_index=p.amp_index,
                              objective=math.nan, energy_3d_delta_pct=math.nan,
                              energy_5d_delta_pct=math.nan,
                              energy_7d_delta_pct=math.nan,
                              power_delta_pct=math.nan, status="failed: x")
                   for p in result.points)
    broken = SweepResult(spec=result.spec, points=failed,
                         baseline_energy=result.baseline_energy,
                         baseline_power=result.baseline_power)
    with pytest.raises(RuntimeError):
        broken.best()


def test_objective_grid_shape_and_nan():
    grid = _synthetic_result().objective_grid()
    assert grid.shape == (2, 2)
    assert grid[0, 0] == 4.0 and grid[0, 1] == 9.0 and grid[1, 0] == 9.0
    assert math.isnan(grid[1, 1])


def test_csv_layout_and_rank_permutation():
    text = _synthetic_result().to_csv()
    lines = text.strip().split("\n")
    comments = [ln for ln in lines if ln.startswith("#")]
    assert len(comments) == 6  # spec echo, axes, power, three energy planes
    header = lines[len(comments)]
    assert header.startswith("st,amplitude,objective")
    rows = lines[len(comments) + 1:]
    assert len(rows) == 4
    ranks = sorted(int(r.split(",")[7]) for r in rows)
    assert ranks == [1, 2, 3, 4]
    assert rows[-1].endswith("failed: boom")
