"""In-memory model of polar volume scans.

Moments are float32 grids shaped ``(rays, gates)``; missing data is NaN.
Grids are made read-only on construction so a volume can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .errors import ValidationError
from .geometry import RadarSite, VcpDefinition

ELEVATION_MATCH_TOL_DEG = 0.05

MOMENT_LIMITS = {
    "Z": (-35.0, 80.0),
    "V": (-60.0, 60.0),
    "W": (0.0, 20.0),
}


def parse_utc(text: str) -> datetime:
    """Parse an ISO-8601 instant that must carry an explicit ``Z`` suffix."""
    text = text.strip()
    if not text.endswith("Z"):
        raise ValueError(f"timestamp {text!r} is not UTC (missing 'Z' suffix)")
    dt = datetime.fromisoformat(text[:-1])
    if dt.tzinfo is not None:
        raise ValueError(f"timestamp {text!r} carries an offset in addition to 'Z'")
    return dt.replace(tzinfo=timezone.utc)


def format_utc(dt: datetime) -> str:
    dt = dt.astimezone(timezone.utc)
    fmt = "%Y-%m-%dT%H:%M:%S.%fZ" if dt.microsecond else "%Y-%m-%dT%H:%M:%SZ"
    return dt.strftime(fmt)


def _frozen_grid(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float32, copy=True)
    if arr.ndim != 2:
        raise ValidationError("moment grids must be two-dimensional (ray x gate)")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Sweep:
    elevation_deg: float
    ray_azimuths_deg: np.ndarray
    Z: np.ndarray
    V: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        az = np.array(self.ray_azimuths_deg, dtype=float, copy=True)
        az.setflags(write=False)
        object.__setattr__(self, "ray_azimuths_deg", az)
        object.__setattr__(self, "elevation_deg", float(self.elevation_deg))
        for name in "ZVW":
            object.__setattr__(self, name, _frozen_grid(getattr(self, name)))
        if not (self.Z.shape == self.V.shape == self.W.shape):
            raise ValidationError(
                f"moment grids differ in shape: Z{self.Z.shape} V{self.V.shape} W{self.W.shape}"
            )
        if az.shape != (self.Z.shape[0],):
            raise ValidationError(f"{az.size} azimuths for {self.Z.shape[0]} rays")

    @property
    def shape(self):
        return self.Z.shape

    @property
    def rays(self) -> int:
        return self.Z.shape[0]

    @property
    def gates_per_ray(self) -> int:
        return self.Z.shape[1]

    def moment(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def __eq__(self, other):
        if not isinstance(other, Sweep):
            return NotImplemented
        return (
            self.elevation_deg == other.elevation_deg
            and np.array_equal(self.ray_azimuths_deg, other.ray_azimuths_deg)
            and all(
                np.array_equal(getattr(self, m), getattr(other, m), equal_nan=True) for m in "ZVW"
            )
        )

    __hash__ = None

    @classmethod
    def empty(cls, elevation_deg, azimuths_deg, gates_per_ray):
        shape = (len(azimuths_deg), gates_per_ray)
        nan = np.full(shape, np.nan, dtype=np.float32)
        return cls(elevation_deg, azimuths_deg, nan, nan, nan)


@dataclass(frozen=True, eq=False)
class VolumeScan:
    site: RadarSite
    vcp: VcpDefinition
    start_time_utc: datetime
    sweeps: tuple

    def __post_init__(self):
        object.__setattr__(self, "sweeps", tuple(self.sweeps))
        t = self.start_time_utc
        if t.tzinfo is None or t.utcoffset().total_seconds() != 0:
            raise ValidationError("start_time_utc must be a UTC-aware datetime")

    def __eq__(self, other):
        if not isinstance(other, VolumeScan):
            return NotImplemented
        return (
            self.site == other.site
            and self.vcp == other.vcp
            and self.start_time_utc == other.start_time_utc
            and len(self.sweeps) == len(other.sweeps)
            and all(a == b for a, b in zip(self.sweeps, other.sweeps))
        )

    __hash__ = None

    @property
    def lowest_sweep(self) -> Sweep:
        return min(self.sweeps, key=lambda s: s.elevation_deg)

    def validate(self) -> "VolumeScan":
        """Check every invariant; raise :class:`ValidationError` on the first breach."""
        vcp = self.vcp
        elevs = np.asarray(vcp.elevation_angles_deg)
        previous = -np.inf
        for i, sw in enumerate(self.sweeps):
            if sw.elevation_deg <= previous:
                raise ValidationError(f"sweep {i}: sweeps must be ordered by increasing elevation")
            previous = sw.elevation_deg
            if elevs.size == 0 or np.min(np.abs(elevs - sw.elevation_deg)) > ELEVATION_MATCH_TOL_DEG:
                raise ValidationError(
                    f"sweep {i}: elevation {sw.elevation_deg} matches no VCP angle "
                    f"within {ELEVATION_MATCH_TOL_DEG} deg"
                )
            if sw.shape != (vcp.rays_per_sweep, vcp.gates_per_ray):
                raise ValidationError(
                    f"sweep {i}: grid {sw.shape} != VCP "
                    f"({vcp.rays_per_sweep}, {vcp.gates_per_ray})"
                )
            az = sw.ray_azimuths_deg
            if np.any(az < 0) or np.any(az >= 360) or np.any(np.diff(az) <= 0):
                raise ValidationError(f"sweep {i}: azimuths must be strictly increasing in [0, 360)")
            for name, (lo, hi) in MOMENT_LIMITS.items():
                grid = sw.moment(name)
                present = grid[~np.isnan(grid)]
                if present.size and (present.min() < lo or present.max() > hi):
                    raise ValidationError(f"sweep {i}: {name} outside [{lo}, {hi}]")
        return self
