"""Quasi-steady rotor loads under individual pitch actuation.

Per-blade thrust shares respond linearly to blade pitch, which keeps the
MBC algebra of the resulting hub moments exact: cyclic pitch produces pure
tilt/yaw moment oscillations with no collective leakage.  Power carries an
additional quadratic pitch penalty (aerodynamic efficiency is stationary
at fine pitch, so a cyclic schedule costs power even when the blade-mean
pitch stays zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .excitation import (DYNAMIC_KINDS, FlowConditions, StrategyConfig,
                         StrategyKind, excitation_frequency)
from .mbc import AzimuthState, BladeTriple, FixedFrameTriple, forward_mbc

RPM_TO_RAD_S = 2.0 * math.pi / 60.0

# pitch magnitude [deg] beyond which the linearized loads are not trusted
MAX_PITCH_DEG = 30.0

# oscillation periods a command signal must be resolved with (dt bound)
MIN_SAMPLES_PER_PERIOD = 20


@dataclass(frozen=True)
class TurbineParams:
    """Rotor geometry, operating schedule, and load-response gains.

    Gains are relative responses per degree of blade pitch:
    ``pitch_thrust_gain`` scales per-blade thrust, ``pitch_power_gain`` and
    ``pitch_power_curvature`` scale power with the blade-mean pitch and the
    blade-mean squared pitch.
    """

    diameter: float = 126.4            # [m]
    hub_height: float = 90.0           # [m]
    rated_rotor_speed_rpm: float = 12.1
    rated_wind_speed: float = 11.4     # [m/s]
    below_rated_tsr: float = 7.55      # tip-speed ratio on the tracking schedule
    baseline_ct: float = 0.77
    baseline_cp: float = 0.47
    pitch_thrust_gain: float = 0.06    # [1/deg]
    pitch_power_gain: float = 0.016    # [1/deg]
    pitch_power_curvature: float = 0.00736  # [1/deg^2]
    moment_arm_fraction: float = 0.75  # blade-root moment arm / rotor radius

    def __post_init__(self):
        for name in ("diameter", "hub_height", "rated_rotor_speed_rpm",
                     "rated_wind_speed", "below_rated_tsr"):
            if getattr(self, name) <= 0.0:
                raise ValueError("turbine.%s must be > 0, got %g" % (name, getattr(self, name)))
        if not 0.0 < self.baseline_ct < 1.0:
            raise ValueError("turbine.baseline_ct must be in (0, 1), got %g" % self.baseline_ct)
        if not 0.0 < self.baseline_cp < 16.0 / 27.0:
            raise ValueError("turbine.baseline_cp must be in (0, 16/27), got %g" % self.baseline_cp)
        if not 0.0 < self.moment_arm_fraction <= 1.0:
            raise ValueError("turbine.moment_arm_fraction must be in (0, 1], got %g"
                             % self.moment_arm_fraction)

    @property
    def radius(self) -> float:
        return 0.5 * self.diameter

    @property
    def rotor_area(self) -> float:
        return math.pi * self.radius**2

    @property
    def rated_rotor_speed(self) -> float:
        """Rated rotor speed [rad/s]."""
        return self.rated_rotor_speed_rpm * RPM_TO_RAD_S


def rotor_speed_for_wind(params: TurbineParams, wind_speed: float) -> float:
    """Operating rotor speed [rad/s] at a given wind speed.

    Below rated the speed tracks the design tip-speed ratio
    (omega = TSR * U / R); above that it saturates at rated speed.
    """
    if wind_speed <= 0.0:
        raise ValueError("wind_speed must be > 0, got %g" % wind_speed)
    return min(params.below_rated_tsr * wind_speed / params.radius,
               params.rated_rotor_speed)


def blade_loads(params: TurbineParams, flow: FlowConditions,
                pitch: BladeTriple) -> tuple[BladeTriple, BladeTriple]:
    """Per-blade axial force [N] and root flapwise moment [N*m].

    Each blade carries one third of the momentum-theory thrust, reduced
    linearly by its pitch angle and clamped at zero:

        F_b = (1/3) * (1/2) * rho * A * U^2 * C_T * (1 - k * theta_b)

    The root moment applies that force at ``moment_arm_fraction`` of the
    radius.  Pitch magnitudes beyond 30 deg are rejected: the linearization
    has no validity there.
    """
    theta = pitch.as_array()
    if np.any(np.abs(theta) > MAX_PITCH_DEG):
        raise ValueError("blade pitch %s deg exceeds +-%g deg validity range"
                         % (np.array2string(theta, precision=2), MAX_PITCH_DEG))
    q = 0.5 * flow.air_density * params.rotor_area * flow.wind_speed**2
    share = q * params.baseline_ct / 3.0
    force = np.maximum(share * (1.0 - params.pitch_thrust_gain * theta), 0.0)
    arm = params.moment_arm_fraction * params.radius
    moment = force * arm
    f = BladeTriple(*(float(v) for v in force), unit="N")
    m = BladeTriple(*(float(v) for v in moment), unit="N*m")
    return f, m


def aggregate(params: TurbineParams, flow: FlowConditions, az: AzimuthState,
              pitch: BladeTriple, forces: BladeTriple,
              moments: BladeTriple) -> tuple[float, FixedFrameTriple, float]:
    """Rotor thrust [N], fixed-frame hub moments [N*m], and power [W].

    Thrust sums the blade forces; the moment triple is the MBC projection
    of the root moments.  Power is the momentum-theory value penalized by
    the blade-mean pitch and its square, both clamped at zero:

        P = (1/2) * rho * A * U^3 * C_P
            * (1 - g1 * mean(theta) - g2 * mean(theta^2))
    """
    thrust = float(np.sum(forces.as_array()))
    hub = forward_mbc(az, moments)
    theta = pitch.as_array()
    q3 = 0.5 * flow.air_density * params.rotor_area * flow.wind_speed**3
    eta = (1.0 - params.pitch_power_gain * float(np.mean(theta))
           - params.pitch_power_curvature * float(np.mean(theta**2)))
    power = max(q3 * params.baseline_cp * eta, 0.0)
    return thrust, hub, power


@dataclass
class TurbineTimeSeries:
    """Sampled turbine response on a uniform time grid.

    Arrays are aligned on axis 0; per-blade arrays have shape (n, 3).
    ``strategy`` and ``excitation_frequency`` record how the run was forced
    (f_e = 0 for strategies without periodic forcing).
    """

    t: np.ndarray                  # [s]
    psi: np.ndarray                # blade-1 azimuth [rad]
    pitch: np.ndarray              # [deg], (n, 3)
    force: np.ndarray              # [N], (n, 3)
    moment: np.ndarray             # [N*m], (n, 3)
    thrust: np.ndarray             # [N]
    m_tilt: np.ndarray             # [N*m]
    m_yaw: np.ndarray              # [N*m]
    power: np.ndarray              # [W]
    dt: float
    rotor_speed: float             # [rad/s]
    strategy: str = "baseline"
    excitation_frequency: float = 0.0  # [Hz]

    def __len__(self) -> int:
        return len(self.t)

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0]) if len(self.t) else 0.0

    # fixed CSV column order: t, psi, theta1..3, F1..3, M1..3, thrust, Mtilt, Myaw, power
    CSV_COLUMNS = ("t", "psi", "theta1", "theta2", "theta3",
                   "F1", "F2", "F3", "M1", "M2", "M3",
                   "thrust", "Mtilt", "Myaw", "power")

    def to_csv(self, path, header_comments: tuple[str, ...] = ()) -> None:
        """Write the series as CSV; floats use shortest round-trip form."""
        cols = np.column_stack([self.t, self.psi, self.pitch, self.force,
                                self.moment, self.thrust, self.m_tilt,
                                self.m_yaw, self.power])
        with open(path, "w") as fh:
            for line in header_comments:
                fh.write("# %s\n" % line)
            fh.write(",".join(self.CSV_COLUMNS) + "\n")
            for row in cols:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")

    @classmethod
    def from_csv(cls, path) -> "TurbineTimeSeries":
        rows = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or line.startswith("t,"):
                    continue
                rows.append([float(v) for v in line.split(",")])
        data = np.array(rows, dtype=float)
        if data.ndim != 2 or data.shape[1] != len(cls.CSV_COLUMNS):
            raise ValueError("expected %d columns in %s" % (len(cls.CSV_COLUMNS), path))
        t = data[:, 0]
        dt = float(t[1] - t[0]) if len(t) > 1 else 0.0
        return cls(t=t, psi=data[:, 1], pitch=data[:, 2:5], force=data[:, 5:8],
                   moment=data[:, 8:11], thrust=data[:, 11], m_tilt=data[:, 12],
                   m_yaw=data[:, 13], power=data[:, 14], dt=dt,
                   rotor_speed=0.0, strategy="", excitation_frequency=0.0)


def simulate_turbine(cfg: StrategyConfig, params: TurbineParams, flow: FlowConditions,
                     duration: float, dt: float,
                     psi0: float = 0.0) -> TurbineTimeSeries:
    """Simulate the pitch schedule and rotor loads on a uniform time grid.

    Deterministic closed-form evaluation: the rotor speed is constant on
    the operating schedule, so azimuth, pitch commands, and loads are all
    explicit functions of time.  Samples run from t = 0 to ``duration``
    inclusive.

    Parameters
    ----------
    cfg : StrategyConfig
    params : TurbineParams
    flow : FlowConditions
    duration : float
        Simulated span [s]; must cover at least one forcing period for
        periodically forced strategies.
    dt : float
        Sample spacing [s]; must resolve the fastest pitch oscillation
        (f_r + f_e) with at least 20 samples per period.
    psi0 : float
        Initial blade-1 azimuth [rad].

    Returns
    -------
    TurbineTimeSeries
    """
    if duration <= 0.0:
        raise ValueError("duration must be > 0, got %g" % duration)
    if dt <= 0.0:
        raise ValueError("dt must be > 0, got %g" % dt)
    omega = rotor_speed_for_wind(params, flow.wind_speed)
    f_r = omega / (2.0 * math.pi)
    f_e = 0.0
    if cfg.kind in DYNAMIC_KINDS:
        f_e = excitation_frequency(cfg.excitation.strouhal, flow, params.diameter)
        if f_e > 0.0 and duration < 1.0 / f_e:
            raise ValueError("duration %g s is below one excitation period (%g s)"
                             % (duration, 1.0 / f_e))
    dt_max = (1.0 / MIN_SAMPLES_PER_PERIOD) / (f_r + f_e) if (f_r + f_e) > 0 else math.inf
    if dt > dt_max:
        raise ValueError("dt=%g s too coarse: need dt <= %g s to resolve the "
                         "fastest pitch component at %g Hz"
                         % (dt, dt_max, f_r + f_e))

    n = int(round(duration / dt)) + 1
    t = np.arange(n) * dt
    psi1 = psi0 + omega * t
    psi_cmd = psi1 + cfg.azimuth_offset
    # blade azimuths, shape (n, 3)
    psi_b = psi_cmd[:, None] + np.array([0.0, 1.0, 2.0]) * (2.0 * math.pi / 3.0)

    # fixed-frame reference (deg), vectorized over t
    col = np.zeros(n)
    tilt = np.zeros(n)
    yaw = np.zeros(n)
    if cfg.kind is StrategyKind.SIC:
        col[:] = cfg.derate_pitch_offset
    elif cfg.kind in DYNAMIC_KINDS:
        exc = cfg.excitation
        amp = exc.amplitude * np.ones(n)
        if exc.ramp_time > 0.0:
            amp *= np.clip(t / exc.ramp_time, 0.0, 1.0)
        phi = 2.0 * math.pi * f_e * t + exc.phase_offset
        s, c = np.sin(phi), np.cos(phi)
        if cfg.kind is StrategyKind.DIC:
            col = amp * s
        elif cfg.kind is StrategyKind.TILT_DIPC:
            tilt = amp * s
        elif cfg.kind is StrategyKind.YAW_DIPC:
            yaw = amp * s
        elif cfg.kind is StrategyKind.HELIX_CCW:
            tilt, yaw = amp * s, amp * c
        elif cfg.kind is StrategyKind.HELIX_CW:
            tilt, yaw = amp * s, -amp * c

    theta = col[:, None] + np.cos(psi_b) * tilt[:, None] + np.sin(psi_b) * yaw[:, None]
    if np.any(np.abs(theta) > MAX_PITCH_DEG):
        raise ValueError("pitch schedule exceeds +-%g deg validity range" % MAX_PITCH_DEG)

    q = 0.5 * flow.air_density * params.rotor_area * flow.wind_speed**2
    share = q * params.baseline_ct / 3.0
    force = np.maximum(share * (1.0 - params.pitch_thrust_gain * theta), 0.0)
    moment = force * (params.moment_arm_fraction * params.radius)

    thrust = force.sum(axis=1)
    # fixed-frame moments: same projection as forward_mbc, vectorized
    m_tilt = (2.0 / 3.0) * np.sum(np.cos(psi_b) * moment, axis=1)
    m_yaw = (2.0 / 3.0) * np.sum(np.sin(psi_b) * moment, axis=1)

    q3 = 0.5 * flow.air_density * params.rotor_area * flow.wind_speed**3
    eta = (1.0 - params.pitch_power_gain * theta.mean(axis=1)
           - params.pitch_power_curvature * (theta**2).mean(axis=1))
    power = np.maximum(q3 * params.baseline_cp * eta, 0.0)

    return TurbineTimeSeries(
        t=t, psi=np.mod(psi1, 2.0 * math.pi), pitch=theta, force=force,
        moment=moment, thrust=thrust, m_tilt=m_tilt, m_yaw=m_yaw, power=power,
        dt=dt, rotor_speed=omega, strategy=cfg.name, excitation_frequency=f_e)
