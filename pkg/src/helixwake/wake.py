"""Reduced-order dynamic wake model on a line of downstream stations.

Each station carries a Gaussian deficit slice: centerline offset (y_c, z_c),
deficit amplitude, and width sigma.  The rotor-plane slice responds to the
fixed-frame hub moments through a first-order lag (time constant D/U) and is
advected downstream at the momentum-theory wake speed U*(1-a), so transverse
forcing appears downstream as a traveling wave with wavelength U_adv / f_e.

Recovery: the deficit decays and the width grows at base rates multiplied by
(1 + gamma * mixing), where the mixing measure is built from the trailing
history of the local centerline motion (crossflow speed times excursion, the
rate at which the wake sweeps through fresh fluid) plus the pulsation of the
deficit itself.  Vertical and horizontal motion are weighted separately:
vertical excursions mix more effectively, which is what makes tilt actuation
outperform yaw actuation.

Coordinates: x downstream, z vertical up, y horizontal and positive to the
right for an observer upstream looking downstream.  A counterclockwise locus
seen by that observer has increasing atan2(z_c, y_c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .excitation import FlowConditions
from .rotor import TurbineParams, TurbineTimeSeries


@dataclass(frozen=True)
class WakeGridConfig:
    """Station line and cross-plane sampling grid.

    ``x_extent`` is the downstream span covered by ``nx`` equally spaced
    stations (station 0 sits at the rotor plane); the cross plane spans
    ``cross_extent`` in both y and z, centered on the undeflected hub.
    """

    x_extent: float = 8.0 * 126.4    # [m]
    cross_extent: float = 2.0 * 126.4  # [m], total width
    nx: int = 128
    ny: int = 64
    nz: int = 64

    def __post_init__(self):
        if self.x_extent <= 0.0 or self.cross_extent <= 0.0:
            raise ValueError("wake grid extents must be > 0")
        if self.nx < 16:
            raise ValueError("wake_grid.nx must be >= 16, got %d" % self.nx)
        if self.ny < 8 or self.nz < 8:
            raise ValueError("wake_grid.ny and nz must be >= 8")

    @property
    def dx(self) -> float:
        return self.x_extent / (self.nx - 1)


@dataclass(frozen=True)
class WakeModelParams:
    """Calibrated wake-response constants.

    deflection_gain
        Static centerline offset per unit normalized hub moment, in rotor
        diameters.  Normalization: m = M / (q * A * D/8).  Calibrated so a
        static yaw moment from a 2.5 deg fixed-frame pitch offset deflects
        the wake by 0.1 D.
    recovery_base, recovery_ti
        Base deficit decay rate in units of U/D; the ambient turbulence
        intensity adds recovery_ti * TI.
    expansion_rate
        Base width growth dsigma/dx (dimensionless).
    mixing_gain
        Gain on the mixing measure multiplying both recovery and expansion.
    horizontal_mixing_weight, vertical_mixing_weight
        Anisotropy of the mixing measure; horizontal excursions entrain
        less effectively than vertical ones.
    axial_mixing_coeff
        Weight of the deficit-pulsation term (collective forcing mixes by
        pulsing the deficit rather than displacing the centerline).
    """

    deflection_gain: float = 0.865801
    recovery_base: float = 0.02
    recovery_ti: float = 0.35
    expansion_rate: float = 0.03
    mixing_gain: float = 18.19  # calibrated, see demos/06_calibrate_defaults.py
    horizontal_mixing_weight: float = 0.52
    vertical_mixing_weight: float = 1.0
    axial_mixing_coeff: float = 0.5963  # calibrated, see demos/06_calibrate_defaults.py
    enable_recovery: bool = True
    enable_expansion: bool = True

    def __post_init__(self):
        if self.deflection_gain < 0.0:
            raise ValueError("deflection_gain must be >= 0")
        for name in ("recovery_base", "recovery_ti", "expansion_rate", "mixing_gain",
                     "horizontal_mixing_weight", "vertical_mixing_weight",
                     "axial_mixing_coeff"):
            if getattr(self, name) < 0.0:
                raise ValueError("wake_model.%s must be >= 0" % name)


class TurbineSample(NamedTuple):
    """One time sample of the rotor quantities the wake model consumes."""

    t: float        # [s]
    thrust: float   # [N]
    m_tilt: float   # [N*m]
    m_yaw: float    # [N*m]

    @classmethod
    def from_series(cls, series: TurbineTimeSeries, i: int) -> "TurbineSample":
        return cls(float(series.t[i]), float(series.thrust[i]),
                   float(series.m_tilt[i]), float(series.m_yaw[i]))


@dataclass
class SliceField:
    """Axial velocity u(y, z) on the cross plane at one downstream distance."""

    x_over_d: float
    y: np.ndarray        # [m], (ny,)
    z: np.ndarray        # [m], (nz,)
    u: np.ndarray        # [m/s], (ny, nz); u[i, j] = u(y[i], z[j])

    @property
    def dy(self) -> float:
        return float(self.y[1] - self.y[0])

    @property
    def dz(self) -> float:
        return float(self.z[1] - self.z[0])

    def to_text(self, path, header_comments: tuple[str, ...] = ()) -> None:
        """Plain-text grid: header `x/D ny nz dy dz`, then row-major u."""
        with open(path, "w") as fh:
            for line in header_comments:
                fh.write("# %s\n" % line)
            fh.write("%s %d %d %s %s\n" % (repr(self.x_over_d), len(self.y),
                                           len(self.z), repr(self.dy), repr(self.dz)))
            for row in self.u:
                fh.write(" ".join(repr(float(v)) for v in row) + "\n")

    @classmethod
    def from_text(cls, path) -> "SliceField":
        lines = []
        with open(path) as fh:
            for raw in fh:
                raw = raw.strip()
                if raw and not raw.startswith("#"):
                    lines.append(raw)
        if not lines:
            raise ValueError("no grid payload in %s" % path)
        head = lines[0].split()
        x_over_d, ny, nz = float(head[0]), int(head[1]), int(head[2])
        dy, dz = float(head[3]), float(head[4])
        u = np.array([[float(v) for v in line.split()] for line in lines[1:]])
        if u.shape != (ny, nz):
            raise ValueError("grid payload shape %s does not match header (%d, %d)"
                             % (u.shape, ny, nz))
        y = (np.arange(ny) - (ny - 1) / 2.0) * dy
        z = (np.arange(nz) - (nz - 1) / 2.0) * dz
        return cls(x_over_d=x_over_d, y=y, z=z, u=u)

    def to_csv(self, path, header_comments: tuple[str, ...] = ()) -> None:
        """Flat CSV with columns y, z, u (one row per cross-plane node)."""
        with open(path, "w") as fh:
            for line in header_comments:
                fh.write("# %s\n" % line)
            fh.write("# x_over_d = %s\n" % repr(self.x_over_d))
            fh.write("y,z,u\n")
            for i, yv in enumerate(self.y):
                for j, zv in enumerate(self.z):
                    fh.write("%s,%s,%s\n" % (repr(float(yv)), repr(float(zv)),
                                             repr(float(self.u[i, j]))))


def advection_speed(params: TurbineParams, flow: FlowConditions) -> float:
    """Wake advection speed U * (1 - a) with a from the baseline C_T."""
    a = 0.5 * (1.0 - math.sqrt(1.0 - params.baseline_ct))
    return flow.wind_speed * (1.0 - a)


@dataclass
class WakeState:
    """Mutable wake state: one writer (step_wake) advances it in place."""

    grid: WakeGridConfig
    params: TurbineParams
    flow: FlowConditions
    model: WakeModelParams
    dt: float
    x: np.ndarray          # station positions [m], (nx,)
    y_c: np.ndarray        # centerline horizontal offset [m]
    z_c: np.ndarray        # centerline vertical offset [m]
    deficit: np.ndarray    # Gaussian amplitude as fraction of U, in [0, 1]
    sigma: np.ndarray      # Gaussian width [m], >= D / sqrt(8)
    v_y: np.ndarray        # centerline rate of change [m/s]
    v_z: np.ndarray
    t: float
    u_adv: float
    tau: float             # boundary lag time constant [s]
    sigma0: float
    moment_norm: float     # q * A * D/8 [N*m]
    boundary_y: float = 0.0
    boundary_z: float = 0.0
    # trailing-window history for the mixing measure
    window: int = 1
    _hist_s2: np.ndarray = field(default=None, repr=False)
    _hist_r2: np.ndarray = field(default=None, repr=False)
    _hist_d: np.ndarray = field(default=None, repr=False)
    _hist_ptr: int = 0
    _hist_count: int = 0
    _sum_s2: np.ndarray = field(default=None, repr=False)
    _sum_r2: np.ndarray = field(default=None, repr=False)
    _sum_d: np.ndarray = field(default=None, repr=False)
    _sum_d2: np.ndarray = field(default=None, repr=False)
    mixing: np.ndarray = field(default=None, repr=False)


def init_wake(grid: WakeGridConfig, params: TurbineParams, flow: FlowConditions,
              model: WakeModelParams | None = None, dt: float = 0.1,
              mixing_window: float | None = None) -> WakeState:
    """Initial wake state: straight centerline, momentum-theory deficit.

    Parameters
    ----------
    grid, params, flow : configuration objects
    model : WakeModelParams, optional
        Calibrated constants; defaults are used when omitted.
    dt : float
        Step size [s] every subsequent ``step_wake`` call must use.
        The CFL bound U * dt <= dx is enforced here.
    mixing_window : float, optional
        Trailing window [s] for the mixing statistics; defaults to one
        advective time D / U.  Pass one forcing period for excited runs.

    Returns
    -------
    WakeState
        deficit = 1 - sqrt(1 - C_T) and sigma = D / sqrt(8) everywhere,
        zero deflection.
    """
    model = model or WakeModelParams()
    if dt <= 0.0:
        raise ValueError("dt must be > 0, got %g" % dt)
    if flow.wind_speed * dt > grid.dx * (1.0 + 1e-12):
        raise ValueError("CFL violation: U*dt = %g m exceeds station spacing %g m"
                         % (flow.wind_speed * dt, grid.dx))
    d = params.diameter
    if mixing_window is None:
        mixing_window = d / flow.wind_speed
    window = max(1, int(round(mixing_window / dt)))

    nx = grid.nx
    x = np.linspace(0.0, grid.x_extent, nx)
    deficit0 = 1.0 - math.sqrt(1.0 - params.baseline_ct)
    q = 0.5 * flow.air_density * flow.wind_speed**2
    state = WakeState(
        grid=grid, params=params, flow=flow, model=model, dt=dt,
        x=x, y_c=np.zeros(nx), z_c=np.zeros(nx),
        deficit=np.full(nx, deficit0), sigma=np.full(nx, d / math.sqrt(8.0)),
        v_y=np.zeros(nx), v_z=np.zeros(nx), t=0.0,
        u_adv=advection_speed(params, flow), tau=d / flow.wind_speed,
        sigma0=d / math.sqrt(8.0), moment_norm=q * params.rotor_area * d / 8.0,
        window=window)
    state._hist_s2 = np.zeros((window, nx))
    state._hist_r2 = np.zeros((window, nx))
    state._hist_d = np.zeros((window, nx))
    state._sum_s2 = np.zeros(nx)
    state._sum_r2 = np.zeros(nx)
    state._sum_d = np.zeros(nx)
    state._sum_d2 = np.zeros(nx)
    state.mixing = np.zeros(nx)
    return state


def _advect(q: np.ndarray, alpha: float) -> np.ndarray:
    """Semi-Lagrangian advection by a uniform fraction alpha of a cell.

    Interior stations use Catmull-Rom interpolation at the departure point
    (third-order, negligible numerical damping of resolved waves); the two
    stations adjacent to the domain ends fall back to linear interpolation.
    Station 0 is left untouched (boundary, overwritten by the caller).
    """
    n = q.shape[0]
    out = np.empty_like(q)
    out[0] = q[0]
    s = 1.0 - alpha  # departure-point coordinate in [x_{i-1}, x_i]
    # linear fallback at both ends
    out[1] = (1.0 - s) * q[0] + s * q[1]
    out[n - 1] = (1.0 - s) * q[n - 2] + s * q[n - 1]
    if n > 3:
        p0, p1, p2, p3 = q[:-3], q[1:-2], q[2:-1], q[3:]
        s2, s3 = s * s, s * s * s
        out[2:-1] = 0.5 * (2.0 * p1 + (p2 - p0) * s
                           + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s2
                           + (3.0 * p1 - p0 - 3.0 * p2 + p3) * s3)
    return out


def step_wake(state: WakeState, sample: TurbineSample, dt: float) -> WakeState:
    """Advance the wake one step using the rotor sample at the state clock.

    Order of operations: advect all station properties downstream, update
    the rotor-plane boundary (moment-driven lag for the deflection,
    instantaneous thrust coefficient for the deficit), refresh the mixing
    statistics, then apply recovery and expansion.

    Returns the same state object for call chaining.
    """
    if abs(dt - state.dt) > 1e-12 * max(1.0, state.dt):
        raise ValueError("dt=%g differs from the dt=%g the state was initialized with"
                         % (dt, state.dt))
    if abs(sample.t - state.t) > 1e-6 * max(1.0, dt):
        raise ValueError("sample time %g s does not match wake clock %g s"
                         % (sample.t, state.t))
    m = state.model
    flow = state.flow
    params = state.params
    u = flow.wind_speed
    alpha = state.u_adv * dt / state.grid.dx

    y_old = state.y_c
    z_old = state.z_c
    y_new = _advect(y_old, alpha)
    z_new = _advect(z_old, alpha)
    state.deficit = _advect(state.deficit, alpha)
    state.sigma = _advect(state.sigma, alpha)

    # rotor-plane boundary: first-order lag toward the moment-set target.
    # Sign convention: the wake deflects opposite the hub-moment vector, so
    # the CCW pitch reference traces a CCW centerline locus seen from
    # upstream (increasing atan2(z_c, y_c)).
    target_z = -m.deflection_gain * params.diameter * sample.m_tilt / state.moment_norm
    target_y = -m.deflection_gain * params.diameter * sample.m_yaw / state.moment_norm
    decay = 1.0 - math.exp(-dt / state.tau)
    state.boundary_z += decay * (target_z - state.boundary_z)
    state.boundary_y += decay * (target_y - state.boundary_y)
    y_new[0] = state.boundary_y
    z_new[0] = state.boundary_z

    q = 0.5 * flow.air_density * params.rotor_area * u**2
    ct_inst = min(max(sample.thrust / q, 0.0), 0.9999)
    state.deficit[0] = 1.0 - math.sqrt(1.0 - ct_inst)
    state.sigma[0] = state.sigma0

    # centerline rate of change seen at each station
    state.v_y = (y_new - y_old) / dt
    state.v_z = (z_new - z_old) / dt
    state.y_c = y_new
    state.z_c = z_new

    # trailing-window mixing statistics
    by, bz = m.horizontal_mixing_weight, m.vertical_mixing_weight
    s2 = by * state.v_y**2 + bz * state.v_z**2
    r2 = by * state.y_c**2 + bz * state.z_c**2
    ptr = state._hist_ptr
    state._sum_s2 += s2 - state._hist_s2[ptr]
    state._sum_r2 += r2 - state._hist_r2[ptr]
    state._sum_d += state.deficit - state._hist_d[ptr]
    state._sum_d2 += state.deficit**2 - state._hist_d[ptr] ** 2
    state._hist_s2[ptr] = s2
    state._hist_r2[ptr] = r2
    state._hist_d[ptr] = state.deficit
    state._hist_ptr = (ptr + 1) % state.window
    state._hist_count = min(state._hist_count + 1, state.window)

    count = state._hist_count
    rms_s = np.sqrt(np.maximum(state._sum_s2, 0.0) / count)
    rms_r = np.sqrt(np.maximum(state._sum_r2, 0.0) / count)
    var_d = np.maximum(state._sum_d2 / count - (state._sum_d / count) ** 2, 0.0)
    # swept-area rate of the centerline, normalized by U * D/8, plus the
    # deficit pulsation: both are dimensionless mixing intensities
    state.mixing = (rms_s * rms_r / (u * params.diameter / 8.0)
                    + m.axial_mixing_coeff * np.sqrt(var_d))

    # station 0 is the rotor-plane boundary condition: recovery and
    # expansion act only on the advected interior.
    enhance = 1.0 + m.mixing_gain * state.mixing
    if m.enable_recovery:
        r0 = (m.recovery_base + m.recovery_ti * flow.turbulence_intensity) * u / params.diameter
        state.deficit[1:] *= np.exp(-r0 * enhance[1:] * dt)
    if m.enable_expansion:
        state.sigma[1:] += m.expansion_rate * state.u_adv * enhance[1:] * dt

    state.t += dt
    return state


def centerline(state: WakeState, x: float | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Centerline offsets (y_c, z_c) [m] at downstream position(s) x [m].

    Linear interpolation between stations; x outside [0, x_extent] is
    rejected.
    """
    xq = np.asarray(x, dtype=float)
    # 1e-9 m slack absorbs roundoff when a probe plane is computed as
    # n * diameter against an extent parsed from text
    if np.any(xq < -1e-9) or np.any(xq > state.grid.x_extent + 1e-9):
        raise ValueError("x=%s m outside the wake extent [0, %g] m"
                         % (np.array2string(np.atleast_1d(xq)), state.grid.x_extent))
    xq = np.clip(xq, 0.0, state.grid.x_extent)
    return np.interp(xq, state.x, state.y_c), np.interp(xq, state.x, state.z_c)


def extract_slice(state: WakeState, x: float) -> SliceField:
    """Gaussian-deficit velocity field on the cross plane at x [m].

        u(y, z) = U * (1 - deficit * exp(-((y-y_c)^2 + (z-z_c)^2) / (2 sigma^2)))

    x must lie inside the station line; integer rotor-diameter planes are
    the usual probe locations.
    """
    if not -1e-9 <= x <= state.grid.x_extent + 1e-9:
        raise ValueError("x=%g m outside the wake extent [0, %g] m"
                         % (x, state.grid.x_extent))
    x = min(max(x, 0.0), state.grid.x_extent)
    yc = float(np.interp(x, state.x, state.y_c))
    zc = float(np.interp(x, state.x, state.z_c))
    dfc = float(np.interp(x, state.x, state.deficit))
    sig = float(np.interp(x, state.x, state.sigma))
    g = state.grid
    y = np.linspace(-0.5 * g.cross_extent, 0.5 * g.cross_extent, g.ny)
    z = np.linspace(-0.5 * g.cross_extent, 0.5 * g.cross_extent, g.nz)
    yy = (y[:, None] - yc) ** 2
    zz = (z[None, :] - zc) ** 2
    u = state.flow.wind_speed * (1.0 - dfc * np.exp(-(yy + zz) / (2.0 * sig**2)))
    return SliceField(x_over_d=x / state.params.diameter, y=y, z=z, u=u)


def momentum_deficit_integral(state: WakeState) -> np.ndarray:
    """Per-station momentum deficit integral(U - u) * u dA [m^4/s^2].

    Closed form for an unbounded Gaussian slice: pi * U^2 * sigma^2
    * deficit * (2 - deficit).  With recovery and expansion disabled this
    is conserved along the station line (pure advection).
    """
    u = state.flow.wind_speed
    return math.pi * u**2 * state.sigma**2 * state.deficit * (2.0 - state.deficit)
