"""Run configuration: a nested YAML file mapped onto the model dataclasses.

Every output artifact embeds a short hash of the fully resolved
configuration, so a result file can always be traced back to the exact
settings that produced it.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field, fields

import yaml

from .excitation import (ExcitationParams, FlowConditions, StrategyConfig,
                         StrategyKind)
from .rotor import TurbineParams
from .sweep import SweepSpec
from .wake import WakeGridConfig, WakeModelParams


class ConfigError(ValueError):
    """Invalid or unreadable configuration; the message names the field."""


_DEFAULT_STRATEGIES = ("baseline", "yaw-dipc", "tilt-dipc", "helix-ccw",
                       "helix-cw", "dic", "sic")


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs: physics settings plus run plumbing.

    ``duration`` of None means "spin-up plus ten excitation periods",
    resolved per strategy at run time.  ``seed`` is carried for forward
    compatibility; the current model is fully deterministic.
    """

    turbine: TurbineParams = field(default_factory=TurbineParams)
    flow: FlowConditions = field(default_factory=FlowConditions)
    grid: WakeGridConfig = field(default_factory=WakeGridConfig)
    wake: WakeModelParams = field(default_factory=WakeModelParams)
    excitation: ExcitationParams = field(default_factory=ExcitationParams)
    strategies: tuple[str, ...] = _DEFAULT_STRATEGIES
    derate_pitch_offset: float = 1.485252
    duration: float | None = None
    dt: float = 0.1
    periods: int = 10
    settle_periods: int = 1
    snapshots_per_period: int = 64
    planes: tuple[int, ...] = (3, 5, 7)
    output_dir: str = "out"
    seed: int = 0

    def __post_init__(self):
        if not self.strategies:
            raise ConfigError("run.strategies must name at least one strategy")
        for name in self.strategies:
            StrategyKind(name)  # raises ValueError on an unknown name
        if not self.dt > 0.0:
            raise ConfigError("run.dt must be > 0")
        if self.duration is not None and not self.duration > 0.0:
            raise ConfigError("run.duration must be > 0 when given")
        if self.periods < 1:
            raise ConfigError("run.periods must be >= 1")
        if self.settle_periods < 0:
            raise ConfigError("run.settle_periods must be >= 0")
        if self.snapshots_per_period < 1:
            raise ConfigError("run.snapshots_per_period must be >= 1")
        if not self.planes:
            raise ConfigError("run.planes must list at least one plane")
        if any(p < 1 for p in self.planes):
            raise ConfigError("run.planes entries must be >= 1 (diameters)")

    def strategy_config(self, name: str) -> StrategyConfig:
        """Build the StrategyConfig for one named strategy."""
        return StrategyConfig(kind=StrategyKind(name),
                              excitation=self.excitation,
                              derate_pitch_offset=self.derate_pitch_offset)


def _as_dict(obj) -> dict:
    out = {}
    for f in fields(obj):
        v = getattr(obj, f.name)
        if isinstance(v, StrategyKind):
            v = v.value
        elif isinstance(v, tuple):
            v = list(v)
        elif dataclasses.is_dataclass(v):
            v = _as_dict(v)
        out[f.name] = v
    return out


def config_hash(cfg) -> str:
    """12-hex-digit digest of a config dataclass, stable across runs."""
    payload = json.dumps(_as_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


_SECTION_TYPES = {
    "turbine": TurbineParams,
    "flow": FlowConditions,
    "grid": WakeGridConfig,
    "wake": WakeModelParams,
    "excitation": ExcitationParams,
}
_RUN_KEYS = ("strategies", "derate_pitch_offset", "duration", "dt", "periods",
             "settle_periods", "snapshots_per_period", "planes", "output_dir",
             "seed")


def _build_section(section: str, cls, data: dict):
    if not isinstance(data, dict):
        raise ConfigError("%s must be a mapping" % section)
    known = {f.name for f in fields(cls)}
    for key in data:
        if key not in known:
            raise ConfigError("unknown key %s.%s" % (section, key))
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError("%s: %s" % (section, exc)) from exc


def _load_yaml(path) -> dict:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("cannot read %s: %s" % (path, exc)) from exc
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = " (line %d)" % (mark.line + 1) if mark is not None else ""
        raise ConfigError("cannot parse %s%s: %s" % (path, where, exc)) from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("%s: top level must be a mapping" % path)
    return data


def load_run_config(path) -> RunConfig:
    """Read a YAML run configuration, applying defaults for absent keys."""
    data = _load_yaml(path)
    kwargs = {}
    for section, raw in data.items():
        if section in _SECTION_TYPES:
            kwargs[section] = _build_section(section, _SECTION_TYPES[section],
                                             raw if raw is not None else {})
        elif section == "run":
            if not isinstance(raw, dict):
                raise ConfigError("run must be a mapping")
            for key, value in raw.items():
                if key not in _RUN_KEYS:
                    raise ConfigError("unknown key run.%s" % key)
                if key in ("strategies", "planes"):
                    if not isinstance(value, list):
                        raise ConfigError("run.%s must be a list" % key)
                    value = tuple(value)
                kwargs[key] = value
        else:
            raise ConfigError("unknown section %r" % section)
    try:
        return RunConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_sweep_spec(path) -> SweepSpec:
    """Read a YAML sweep specification.

    Axes are nested mappings: ``st: {min, max, count}`` and
    ``amplitude: {min, max, count}``.
    """
    data = _load_yaml(path)
    kwargs = {}
    for key, raw in data.items():
        if key in ("st", "amplitude"):
            if not isinstance(raw, dict):
                raise ConfigError("%s must be a mapping with min/max/count" % key)
            for axis_key, value in raw.items():
                if axis_key not in ("min", "max", "count"):
                    raise ConfigError("unknown key %s.%s" % (key, axis_key))
                kwargs["%s_%s" % (key if key == "st" else "amp", axis_key)] = value
        elif key in ("strategy", "objective", "penalty_weight"):
            kwargs[key] = raw
        else:
            raise ConfigError("unknown key %r in sweep spec" % key)
    try:
        return SweepSpec(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError("sweep spec: %s" % exc) from exc
