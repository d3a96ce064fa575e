"""Pitch excitation strategies in the fixed (collective/tilt/yaw) frame.

Each strategy defines a time-dependent reference triple; the MBC inverse
turns it into per-blade pitch commands.  Periodic strategies are forced at
the Strouhal-scaled frequency f_e = St * U / D, far below the rotational
frequency, so individual blades see sidebands of the one-per-rev frequency.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .mbc import AzimuthState, BladeTriple, FixedFrameTriple, inverse_mbc

TWO_PI = 2.0 * math.pi


class StrategyKind(enum.Enum):
    """Supported actuation strategies."""

    BASELINE = "baseline"
    SIC = "sic"                # static collective derate
    DIC = "dic"                # dynamic (sinusoidal) collective
    YAW_DIPC = "yaw-dipc"      # sinusoidal yaw-component pitch
    TILT_DIPC = "tilt-dipc"    # sinusoidal tilt-component pitch
    HELIX_CCW = "helix-ccw"    # quadrature tilt+yaw, counterclockwise from upstream
    HELIX_CW = "helix-cw"      # quadrature tilt+yaw, clockwise from upstream


# strategies whose reference varies in time
DYNAMIC_KINDS = frozenset(
    {StrategyKind.DIC, StrategyKind.YAW_DIPC, StrategyKind.TILT_DIPC,
     StrategyKind.HELIX_CCW, StrategyKind.HELIX_CW}
)


@dataclass(frozen=True)
class ExcitationParams:
    """Periodic forcing parameters.

    Parameters
    ----------
    strouhal : float
        Strouhal number St = f_e * D / U of the forcing.
    amplitude : float
        Pitch oscillation amplitude [deg].
    phase_offset : float
        Phase added to 2*pi*f_e*t [rad].
    ramp_time : float
        Linear amplitude ramp from t=0 [s]; 0 disables the ramp.
    """

    strouhal: float = 0.25
    amplitude: float = 2.5
    phase_offset: float = 0.0
    ramp_time: float = 0.0

    def __post_init__(self):
        if self.strouhal < 0.0:
            raise ValueError("strouhal must be >= 0, got %g" % self.strouhal)
        if self.amplitude < 0.0:
            raise ValueError("amplitude must be >= 0, got %g" % self.amplitude)
        if self.ramp_time < 0.0:
            raise ValueError("ramp_time must be >= 0, got %g" % self.ramp_time)


@dataclass(frozen=True)
class FlowConditions:
    """Inflow description: uniform wind plus an ambient turbulence level."""

    wind_speed: float = 8.0          # [m/s]
    turbulence_intensity: float = 0.059  # [-], fraction of wind speed
    air_density: float = 1.225       # [kg/m^3]

    def __post_init__(self):
        if self.wind_speed <= 0.0:
            raise ValueError("flow.wind_speed must be > 0, got %g" % self.wind_speed)
        if self.turbulence_intensity < 0.0:
            raise ValueError("flow.turbulence_intensity must be >= 0, got %g"
                             % self.turbulence_intensity)
        if self.air_density <= 0.0:
            raise ValueError("flow.air_density must be > 0, got %g" % self.air_density)


@dataclass(frozen=True)
class StrategyConfig:
    """A named strategy with its forcing parameters.

    ``derate_pitch_offset`` [deg] only applies to the static derate (SIC).
    ``azimuth_offset`` [rad] shifts the azimuth used when mapping the fixed
    frame onto the blades; zero keeps blade 1 referenced to top dead center.
    """

    kind: StrategyKind = StrategyKind.BASELINE
    excitation: ExcitationParams = field(default_factory=ExcitationParams)
    derate_pitch_offset: float = 1.485252  # [deg], calibrated static derate
    azimuth_offset: float = 0.0            # [rad]

    @property
    def name(self) -> str:
        return self.kind.value

    @classmethod
    def from_name(cls, name: str, **kwargs) -> "StrategyConfig":
        """Build a config from a strategy name such as 'helix-ccw'."""
        try:
            kind = StrategyKind(name.strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in StrategyKind)
            raise ValueError("unknown strategy %r (expected one of: %s)" % (name, valid))
        return cls(kind=kind, **kwargs)


def excitation_frequency(strouhal: float, flow: FlowConditions, diameter: float) -> float:
    """Forcing frequency f_e = St * U / D [Hz].

    Parameters
    ----------
    strouhal : float
        Strouhal number, >= 0.
    flow : FlowConditions
    diameter : float
        Rotor diameter [m], > 0.
    """
    if strouhal < 0.0:
        raise ValueError("strouhal must be >= 0, got %g" % strouhal)
    if diameter <= 0.0:
        raise ValueError("diameter must be > 0, got %g" % diameter)
    return strouhal * flow.wind_speed / diameter


def _envelope(exc: ExcitationParams, t: float) -> float:
    """Amplitude ramp factor in [0, 1]."""
    if exc.ramp_time <= 0.0:
        return 1.0
    return min(1.0, max(0.0, t / exc.ramp_time))


def fixed_frame_reference(cfg: StrategyConfig, flow: FlowConditions,
                          diameter: float, t: float) -> FixedFrameTriple:
    """Fixed-frame pitch reference (collective, tilt, yaw) [deg] at time t.

    Baseline is identically zero; SIC holds a constant collective offset;
    DIC oscillates the collective at f_e; the DIPC variants oscillate tilt
    and/or yaw.  The CCW helix drives (tilt, yaw) = A*(sin, cos), rotating
    the reference vector counterclockwise as seen from upstream; the CW
    helix flips the sign of the yaw component.
    """
    kind = cfg.kind
    if kind is StrategyKind.BASELINE:
        return FixedFrameTriple(0.0, 0.0, 0.0, unit="deg")
    if kind is StrategyKind.SIC:
        return FixedFrameTriple(cfg.derate_pitch_offset, 0.0, 0.0, unit="deg")

    exc = cfg.excitation
    f_e = excitation_frequency(exc.strouhal, flow, diameter)
    a = exc.amplitude * _envelope(exc, t)
    phi = TWO_PI * f_e * t + exc.phase_offset
    if kind is StrategyKind.DIC:
        return FixedFrameTriple(a * math.sin(phi), 0.0, 0.0, unit="deg")
    if kind is StrategyKind.TILT_DIPC:
        return FixedFrameTriple(0.0, a * math.sin(phi), 0.0, unit="deg")
    if kind is StrategyKind.YAW_DIPC:
        return FixedFrameTriple(0.0, 0.0, a * math.sin(phi), unit="deg")
    if kind is StrategyKind.HELIX_CCW:
        return FixedFrameTriple(0.0, a * math.sin(phi), a * math.cos(phi), unit="deg")
    if kind is StrategyKind.HELIX_CW:
        return FixedFrameTriple(0.0, a * math.sin(phi), -a * math.cos(phi), unit="deg")
    raise ValueError("unhandled strategy kind %r" % kind)


def blade_pitch_command(cfg: StrategyConfig, flow: FlowConditions, diameter: float,
                        az: AzimuthState, t: float) -> BladeTriple:
    """Per-blade pitch commands [deg] for a strategy at a given azimuth/time.

    The fixed-frame reference is mapped through the inverse MBC transform,
    so each blade command is bounded by |collective| + sqrt(tilt^2 + yaw^2).
    """
    ref = fixed_frame_reference(cfg, flow, diameter, t)
    az_used = az if cfg.azimuth_offset == 0.0 else AzimuthState(az.psi_1 + cfg.azimuth_offset)
    return inverse_mbc(az_used, ref)


def predicted_pitch_frequencies(cfg: StrategyConfig, flow: FlowConditions,
                                diameter: float, rotor_speed: float) -> tuple[float, ...]:
    """Frequencies [Hz] expected in an individual blade's pitch signal.

    With rotational frequency f_r = rotor_speed / 2*pi and forcing f_e:
    tilt and yaw DIPC excite both sidebands f_r -+ f_e, the CCW helix only
    f_r + f_e, the CW helix only f_r - f_e, DIC only f_e, and the
    non-oscillating strategies none.

    Raises
    ------
    ValueError
        If f_e >= f_r for a sideband strategy (the slow-forcing assumption
        breaks down and the sidebands are no longer ordered).
    """
    if cfg.kind in (StrategyKind.BASELINE, StrategyKind.SIC):
        return ()
    f_e = excitation_frequency(cfg.excitation.strouhal, flow, diameter)
    if cfg.kind is StrategyKind.DIC:
        return (f_e,)
    f_r = rotor_speed / TWO_PI
    if f_e >= f_r:
        raise ValueError("excitation frequency %g Hz must be below the rotational "
                         "frequency %g Hz" % (f_e, f_r))
    if cfg.kind is StrategyKind.HELIX_CCW:
        return (f_r + f_e,)
    if cfg.kind is StrategyKind.HELIX_CW:
        return (f_r - f_e,)
    # tilt or yaw DIPC: both sidebands
    return (f_r - f_e, f_r + f_e)
