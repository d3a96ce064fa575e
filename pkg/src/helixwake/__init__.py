"""helixwake: wake-mixing control strategies for wind turbines.

Dynamic individual pitch control schedules (tilt, yaw, helix), a
quasi-steady rotor response, and a reduced-order dynamic wake model with
slice-based energy accounting, plus comparison reports and Strouhal /
amplitude sweeps.
"""

from .analysis import (MetricsReport, StrategyMetrics, build_report,
                       pitch_activity, series_stats, spectrum_peaks,
                       streamtube_energy)
from .config import (ConfigError, RunConfig, config_hash, load_run_config,
                     load_sweep_spec)
from .excitation import (ExcitationParams, FlowConditions, StrategyConfig,
                         StrategyKind, blade_pitch_command,
                         excitation_frequency, fixed_frame_reference,
                         predicted_pitch_frequencies)
from .mbc import (AzimuthState, BladeTriple, FixedFrameTriple,
                  azimuth_advance, forward_mbc, inverse_mbc, inverse_matrix,
                  transform_matrix)
from .rotor import (TurbineParams, TurbineTimeSeries, blade_loads,
                    rotor_speed_for_wind, simulate_turbine)
from .scenario import StrategyRun, default_window, run_comparison, run_strategy
from .sweep import SweepPoint, SweepResult, SweepSpec, run_sweep
from .wake import (SliceField, TurbineSample, WakeGridConfig, WakeModelParams,
                   WakeState, advection_speed, centerline, extract_slice,
                   init_wake, momentum_deficit_integral, step_wake)

__version__ = "0.1.0"

__all__ = [
    "AzimuthState", "BladeTriple", "ConfigError", "ExcitationParams",
    "FixedFrameTriple", "FlowConditions", "MetricsReport", "RunConfig",
    "SliceField", "StrategyConfig", "StrategyKind", "StrategyMetrics",
    "StrategyRun", "SweepPoint", "SweepResult", "SweepSpec",
    "TurbineParams", "TurbineSample", "TurbineTimeSeries", "WakeGridConfig",
    "WakeModelParams", "WakeState", "advection_speed", "azimuth_advance",
    "blade_loads", "blade_pitch_command", "build_report", "centerline",
    "config_hash", "default_window", "excitation_frequency", "extract_slice",
    "fixed_frame_reference", "forward_mbc", "init_wake", "inverse_matrix",
    "inverse_mbc", "load_run_config", "load_sweep_spec",
    "momentum_deficit_integral", "pitch_activity",
    "predicted_pitch_frequencies", "rotor_speed_for_wind", "run_comparison",
    "run_strategy", "run_sweep", "series_stats", "simulate_turbine",
    "spectrum_peaks", "step_wake", "streamtube_energy", "transform_matrix",
    "__version__",
]
