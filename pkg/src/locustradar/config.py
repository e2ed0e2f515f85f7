"""Run configuration: one TOML file plus command-line overrides.

Example::

    [filter]
    z_min_dbz = 15.0
    v_max_abs_ms = 6.0
    height_ceiling_km = 2.0
    min_cluster_gates = 5
    use_spectrum_width = false
    connectivity = "FOUR"
    reject_missing_velocity = true

    [tracker]
    max_association_speed_ms = 10.0
    max_missed_scans = 2
    min_track_observations = 3

    [crosscheck]
    rain_radius_km = 150.0
    downwind_max_deg = 45.0
    upwind_min_deg = 135.0

    [alerts]
    lead_time_threshold_h = 7.0
    range_limit_km = 150.0
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import __version__
from .crosscheck import CrossCheckConfig
from .echo_filter import FilterConfig
from .errors import ConfigError
from .tracker import TrackerConfig


@dataclass(frozen=True)
class AlertConfig:
    lead_time_threshold_h: float = 7.0
    range_limit_km: float = 150.0


_SECTIONS = {
    "filter": FilterConfig,
    "tracker": TrackerConfig,
    "crosscheck": CrossCheckConfig,
    "alerts": AlertConfig,
}


def _public_fields(cls):
    return [f for f in dataclasses.fields(cls) if not f.name.startswith("_")]


@dataclass(frozen=True)
class RunConfig:
    filter: FilterConfig = field(default_factory=FilterConfig)
    tracker: TrackerConfig = field(default_factory=TrackerConfig)
    crosscheck: CrossCheckConfig = field(default_factory=CrossCheckConfig)
    alerts: AlertConfig = field(default_factory=AlertConfig)

    def to_dict(self):
        out = {}
        for name in _SECTIONS:
            section = getattr(self, name)
            values = {}
            for f in _public_fields(type(section)):
                v = getattr(section, f.name)
                values[f.name] = v.value if hasattr(v, "value") else v
            out[name] = values
        return out

    def provenance(self):
        return {"tool": "locustradar", "version": __version__, "config": self.to_dict()}


def config_from_dict(data: dict, overrides: dict | None = None) -> RunConfig:
    """
    Build a :class:`RunConfig` from nested section dicts.

    ``overrides`` maps ``"section.key"`` to a value and wins over ``data``.
    Unknown sections or keys raise :class:`ConfigError`.
    """
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config section(s): {', '.join(sorted(unknown))}")
    merged = {name: dict(data.get(name, {})) for name in _SECTIONS}
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        section, _, key = dotted.partition(".")
        merged[section][key] = value
    sections = {}
    for name, cls in _SECTIONS.items():
        allowed = {f.name for f in _public_fields(cls)}
        extra = set(merged[name]) - allowed
        if extra:
            raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(sorted(extra))}")
        try:
            sections[name] = cls(**merged[name])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[{name}]: {exc}") from None
    return RunConfig(**sections)


def load_config(path=None, overrides=None) -> RunConfig:
    data = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(data, overrides)
