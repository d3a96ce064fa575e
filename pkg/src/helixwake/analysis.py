"""Energy accounting and run metrics.

Quantifies what a control strategy changes: kinetic energy flux through a
rotor-sized disk downstream (what a waked neighbor could harvest), mean and
variance shifts of power/thrust/blade moment, actuator duty, and the
spectral content of the pitch signals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .excitation import FlowConditions
from .rotor import TurbineParams, TurbineTimeSeries
from .wake import SliceField

# relative variance floor below which a baseline channel counts as constant
_VAR_FLOOR = 1e-12


def _bilinear(field: SliceField, yq: np.ndarray, zq: np.ndarray) -> np.ndarray:
    """Sample u(y, z) at query points with bilinear interpolation."""
    y, z, u = field.y, field.z, field.u
    dy, dz = field.dy, field.dz
    fy = (yq - y[0]) / dy
    fz = (zq - z[0]) / dz
    iy = np.clip(np.floor(fy).astype(int), 0, len(y) - 2)
    iz = np.clip(np.floor(fz).astype(int), 0, len(z) - 2)
    fy = fy - iy
    fz = fz - iz
    return ((1 - fy) * (1 - fz) * u[iy, iz] + fy * (1 - fz) * u[iy + 1, iz]
            + (1 - fy) * fz * u[iy, iz + 1] + fy * fz * u[iy + 1, iz + 1])


def streamtube_energy(slc: SliceField, flow: FlowConditions, params: TurbineParams,
                      exponent: int = 3, n_radial: int = 96,
                      n_azimuth: int = 192) -> float:
    """Kinetic energy flux (1/2) * rho * integral(u^3 dA) through the rotor disk.

    The disk has the rotor diameter and is centered on the undeflected hub
    axis.  Integration is a trapezoid rule in polar coordinates with
    bilinear sampling of the slice grid, which reproduces the closed form
    exactly for a uniform field.

    Parameters
    ----------
    slc : SliceField
    flow : FlowConditions
    params : TurbineParams
        Supplies the disk diameter.
    exponent : int
        3 for energy flux [W]; 2 gives the momentum-flux variant.

    Raises
    ------
    ValueError
        If the disk does not fit inside the slice grid.
    """
    radius = 0.5 * params.diameter
    if radius > slc.y.max() + 1e-9 or radius > slc.z.max() + 1e-9 \
            or -radius < slc.y.min() - 1e-9 or -radius < slc.z.min() - 1e-9:
        raise ValueError("rotor disk (radius %g m) exceeds the slice grid extent"
                         % radius)
    if exponent not in (2, 3):
        raise ValueError("exponent must be 2 or 3, got %r" % (exponent,))
    r = np.linspace(0.0, radius, n_radial)
    w_r = np.full(n_radial, radius / (n_radial - 1))
    w_r[0] *= 0.5
    w_r[-1] *= 0.5
    phi = np.arange(n_azimuth) * (2.0 * math.pi / n_azimuth)
    w_phi = 2.0 * math.pi / n_azimuth
    yq = r[:, None] * np.cos(phi)[None, :]
    zq = r[:, None] * np.sin(phi)[None, :]
    u = _bilinear(slc, yq.ravel(), zq.ravel()).reshape(n_radial, n_azimuth)
    integral = float(np.sum((u**exponent) * r[:, None] * w_r[:, None]) * w_phi)
    return 0.5 * flow.air_density * integral


def pitch_activity(series: TurbineTimeSeries, min_periods: int = 2) -> float:
    """Mean absolute pitch rate [deg/s], averaged over blades and time.

    For periodically forced runs the series must cover at least
    ``min_periods`` forcing periods; the mean over whole periods is exact,
    so the guard only rejects fragments short enough to be phase-biased.
    """
    if len(series) < 2:
        raise ValueError("series too short for a pitch rate (need >= 2 samples)")
    f_e = series.excitation_frequency
    if f_e > 0.0 and series.duration < min_periods / f_e:
        raise ValueError("series covers %.4g s but %d excitation periods need %.4g s"
                         % (series.duration, min_periods, min_periods / f_e))
    rate = np.abs(np.diff(series.pitch, axis=0)) / series.dt
    return float(np.mean(rate))


def _mean_var_pct(sig: np.ndarray, base: np.ndarray) -> tuple[float, float]:
    """Relative mean and variance shift [%] of sig against base.

    The variance shift is relative to the baseline variance; when the
    baseline channel is constant (variance below a floor) the shift is
    normalized by the squared baseline mean instead, which keeps the
    number finite and preserves ordering between strategies.
    """
    mean_b = float(np.mean(base))
    mean_s = float(np.mean(sig))
    var_b = float(np.var(base))
    var_s = float(np.var(sig))
    denom = abs(mean_b) if mean_b != 0.0 else 1.0
    mean_pct = 100.0 * (mean_s - mean_b) / denom
    if var_b > _VAR_FLOOR * mean_b**2:
        var_pct = 100.0 * (var_s - var_b) / var_b
    else:
        vden = mean_b**2 if mean_b != 0.0 else 1.0
        var_pct = 100.0 * (var_s - var_b) / vden
    return mean_pct, var_pct


def series_stats(series: TurbineTimeSeries, baseline: TurbineTimeSeries,
                 discard_before: float = 0.0) -> dict[str, float]:
    """Mean/variance shifts [%] of power, thrust, and blade-1 root moment.

    Both series must share the sampling grid; samples before
    ``discard_before`` (spin-up) are dropped from both.

    Returns
    -------
    dict
        Keys power_mean_pct, power_var_pct, thrust_mean_pct,
        thrust_var_pct, moment_mean_pct, moment_var_pct.
    """
    if len(series) != len(baseline):
        raise ValueError("series lengths differ: %d vs %d" % (len(series), len(baseline)))
    if abs(series.dt - baseline.dt) > 1e-9 * max(series.dt, baseline.dt):
        raise ValueError("series dt differ: %g vs %g" % (series.dt, baseline.dt))
    keep = series.t >= discard_before - 1e-9
    if np.count_nonzero(keep) < 2:
        raise ValueError("discard_before=%g s leaves fewer than 2 samples" % discard_before)
    out = {}
    for name, sig, base in (("power", series.power, baseline.power),
                            ("thrust", series.thrust, baseline.thrust),
                            ("moment", series.moment[:, 0], baseline.moment[:, 0])):
        mean_pct, var_pct = _mean_var_pct(sig[keep], base[keep])
        out[name + "_mean_pct"] = mean_pct
        out[name + "_var_pct"] = var_pct
    return out


def spectrum_peaks(signal: np.ndarray, dt: float, n_peaks: int = 3,
                   exclusion_bins: int = 3) -> list[tuple[float, float]]:
    """Dominant spectral peaks of a uniformly sampled signal.

    Hann-windowed single-sided DFT amplitude, DC excluded.  Peaks are
    picked greedily by magnitude; bins within ``exclusion_bins`` of an
    accepted peak are masked so one tone's main lobe cannot appear twice.
    Amplitudes are window-gain corrected (a unit sine reports ~1).

    Returns
    -------
    list of (frequency [Hz], amplitude) tuples, descending amplitude.
    """
    sig = np.asarray(signal, dtype=float)
    if sig.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if len(sig) < 1024:
        raise ValueError("signal too short for peak detection (need >= 1024 samples)")
    if dt <= 0.0:
        raise ValueError("dt must be > 0, got %g" % dt)
    n = len(sig)
    window = np.hanning(n)
    amp = 2.0 * np.abs(np.fft.rfft(sig * window)) / window.sum()
    freqs = np.fft.rfftfreq(n, dt)
    amp[0] = 0.0  # DC excluded
    peaks = []
    work = amp.copy()
    for _ in range(n_peaks):
        k = int(np.argmax(work))
        if work[k] <= 0.0:
            break
        peaks.append((float(freqs[k]), float(amp[k])))
        lo = max(0, k - exclusion_bins)
        work[lo:k + exclusion_bins + 1] = 0.0
    return peaks


# canonical report row order; extra strategies keep insertion order at the end
_ROW_ORDER = ("baseline", "yaw-dipc", "tilt-dipc", "helix-ccw", "helix-cw", "dic", "sic")


@dataclass
class StrategyMetrics:
    """One report row: all shifts are percentages relative to baseline."""

    strategy: str
    energy_3d_pct: float = 0.0
    energy_5d_pct: float = 0.0
    energy_7d_pct: float = 0.0
    power_mean_pct: float = 0.0
    power_var_pct: float = 0.0
    thrust_mean_pct: float = 0.0
    thrust_var_pct: float = 0.0
    moment_mean_pct: float = 0.0
    moment_var_pct: float = 0.0
    pitch_activity_deg_s: float = 0.0


_METRIC_FIELDS = tuple(f.name for f in fields(StrategyMetrics))[1:]

_METRIC_LABELS = {
    "energy_3d_pct": "Energy 3D [%]",
    "energy_5d_pct": "Energy 5D [%]",
    "energy_7d_pct": "Energy 7D [%]",
    "power_mean_pct": "Power mean [%]",
    "power_var_pct": "Power var [%]",
    "thrust_mean_pct": "Thrust mean [%]",
    "thrust_var_pct": "Thrust var [%]",
    "moment_mean_pct": "Blade moment mean [%]",
    "moment_var_pct": "Blade moment var [%]",
    "pitch_activity_deg_s": "Pitch activity [deg/s]",
}


@dataclass
class MetricsReport:
    """Per-strategy metrics table, baseline row included and identically zero."""

    rows: list[StrategyMetrics]

    def row(self, strategy: str) -> StrategyMetrics:
        for r in self.rows:
            if r.strategy == strategy:
                return r
        raise KeyError("no row for strategy %r" % strategy)

    def to_csv(self, path, header_comments: tuple[str, ...] = ()) -> None:
        """One row per strategy, fixed column order, round-trip floats."""
        with open(path, "w") as fh:
            for line in header_comments:
                fh.write("# %s\n" % line)
            fh.write("strategy," + ",".join(_METRIC_FIELDS) + "\n")
            for r in self.rows:
                vals = ",".join(repr(float(getattr(r, f))) for f in _METRIC_FIELDS)
                fh.write("%s,%s\n" % (r.strategy, vals))

    @classmethod
    def from_csv(cls, path) -> "MetricsReport":
        rows = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or line.startswith("strategy,"):
                    continue
                parts = line.split(",")
                rows.append(StrategyMetrics(parts[0], *(float(v) for v in parts[1:])))
        return cls(rows=rows)

    def to_text(self) -> str:
        """Human-readable table: metrics as rows, strategies as columns."""
        names = [r.strategy for r in self.rows]
        width = max(25, *(len(n) + 2 for n in names))
        head = "%-25s" % "metric" + "".join("%*s" % (width, n) for n in names)
        lines = [head, "-" * len(head)]
        for f in _METRIC_FIELDS:
            cells = "".join("%*.2f" % (width, getattr(r, f)) for r in self.rows)
            lines.append("%-25s%s" % (_METRIC_LABELS[f], cells))
        return "\n".join(lines) + "\n"


def build_report(runs: dict, planes: tuple[int, ...] = (3, 5, 7)) -> MetricsReport:
    """Assemble the strategy-comparison report.

    Parameters
    ----------
    runs : dict
        Strategy name -> scenario run (see ``scenario.run_strategy``); must
        contain a 'baseline' entry, and all runs must share the sampling
        grid and measurement window.
    planes : tuple of int
        Downstream distances [D] for the energy columns; the report always
        labels them 3/5/7, so pass exactly three.

    Returns
    -------
    MetricsReport
        Baseline row identically zero; every entry finite.
    """
    if "baseline" not in runs:
        raise ValueError("runs must include a 'baseline' entry")
    if len(planes) != 3:
        raise ValueError("exactly three energy planes expected, got %r" % (planes,))
    base = runs["baseline"]
    for name, run in runs.items():
        if len(run.series) != len(base.series) or abs(run.series.dt - base.series.dt) > 1e-12:
            raise ValueError("run %r does not share the baseline sampling grid" % name)
        for p in planes:
            if p not in run.energies:
                raise ValueError("run %r has no energy trace at %dD" % (name, p))

    base_energy = {p: float(np.mean(base.energies[p])) for p in planes}
    ordered = [n for n in _ROW_ORDER if n in runs]
    ordered += [n for n in runs if n not in ordered]

    rows = []
    for name in ordered:
        run = runs[name]
        if name == "baseline":
            rows.append(StrategyMetrics(strategy=name))
            continue
        stats = series_stats(run.series, base.series, discard_before=run.measure_start)
        e_pct = {p: 100.0 * (float(np.mean(run.energies[p])) - base_energy[p])
                 / base_energy[p] for p in planes}
        row = StrategyMetrics(
            strategy=name,
            energy_3d_pct=e_pct[planes[0]],
            energy_5d_pct=e_pct[planes[1]],
            energy_7d_pct=e_pct[planes[2]],
            pitch_activity_deg_s=pitch_activity(run.series),
            **stats)
        rows.append(row)

    report = MetricsReport(rows=rows)
    for r in report.rows:
        for f in _METRIC_FIELDS:
            if not math.isfinite(getattr(r, f)):
                raise ValueError("non-finite %s for strategy %r" % (f, r.strategy))
    return report
