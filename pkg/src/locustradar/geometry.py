"""
Radar beam geometry and spherical-earth geodesy.

Beam heights use the 4/3 effective earth radius model. Ranges are handled
in meters at the data-model boundary and in kilometers inside the height
equation; every public function states its unit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import CeilingBelowAntenna, ValidationError

EARTH_RADIUS_KM = 6371.0
EFFECTIVE_RADIUS_KM = 4.0 / 3.0 * EARTH_RADIUS_KM

LUCKNOW_ELEVATIONS_DEG = (0.2, 1.0, 2.0, 3.0, 4.5, 6.0, 9.0, 12.0, 16.0, 21.0)


class Band(str, enum.Enum):
    S = "S"
    C = "C"
    X = "X"


@dataclass(frozen=True)
class RadarSite:
    site_id: str
    latitude_deg: float
    longitude_deg: float
    antenna_height_m: float
    band: Band = Band.S

    def __post_init__(self):
        object.__setattr__(self, "band", Band(self.band))
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise ValidationError(f"latitude {self.latitude_deg} outside [-90, 90]")
        if not -180.0 <= self.longitude_deg <= 180.0:
            raise ValidationError(f"longitude {self.longitude_deg} outside [-180, 180]")
        if not -500.0 <= self.antenna_height_m <= 9000.0:
            raise ValidationError(f"antenna height {self.antenna_height_m} m outside [-500, 9000]")
        if not self.site_id or any(c in self.site_id for c in "\r\n"):
            raise ValidationError("site_id must be a non-empty single-line string")


@dataclass(frozen=True)
class VcpDefinition:
    """Volume coverage pattern: sweep elevations plus the range-gate layout."""

    elevation_angles_deg: tuple[float, ...] = LUCKNOW_ELEVATIONS_DEG
    cadence_s: float = 600.0
    first_gate_range_m: float = 125.0
    gate_spacing_m: float = 250.0
    gates_per_ray: int = 600
    rays_per_sweep: int = 360

    def __post_init__(self):
        elevs = tuple(float(e) for e in self.elevation_angles_deg)
        object.__setattr__(self, "elevation_angles_deg", elevs)
        if any(not 0.0 < e < 90.0 for e in elevs):
            raise ValidationError("elevation angles must lie in (0, 90) degrees")
        if any(b <= a for a, b in zip(elevs, elevs[1:])):
            raise ValidationError("elevation angles must be strictly increasing")
        if not self.gate_spacing_m > 0:
            raise ValidationError("gate_spacing_m must be positive")
        if not self.cadence_s > 0:
            raise ValidationError("cadence_s must be positive")
        if self.first_gate_range_m < 0:
            raise ValidationError("first_gate_range_m must be non-negative")
        if int(self.gates_per_ray) < 1 or int(self.rays_per_sweep) < 1:
            raise ValidationError("gates_per_ray and rays_per_sweep must be >= 1")
        object.__setattr__(self, "gates_per_ray", int(self.gates_per_ray))
        object.__setattr__(self, "rays_per_sweep", int(self.rays_per_sweep))

    def gate_ranges_m(self) -> np.ndarray:
        return gate_range(self.first_gate_range_m, self.gate_spacing_m, np.arange(self.gates_per_ray))

    def default_azimuths_deg(self) -> np.ndarray:
        """Uniformly spaced ray-centre azimuths."""
        step = 360.0 / self.rays_per_sweep
        return np.round((np.arange(self.rays_per_sweep) + 0.5) * step, 2)


@dataclass(frozen=True)
class GateGeo:
    slant_range_km: float
    azimuth_deg: float
    elevation_deg: float
    height_km_msl: float
    latitude_deg: float
    longitude_deg: float


def gate_range(S1_m, dS_m, n):
    """Slant range of gate ``n`` (meters): ``S1 + dS * n``."""
    if np.any(np.asarray(dS_m) <= 0):
        raise ValueError("gate spacing must be positive")
    return S1_m + dS_m * n


def beam_height(slant_range_km, elevation_deg, antenna_height_m):
    """
    Height of the beam centre above mean sea level.

    Parameters
    ----------
    slant_range_km : float or array_like
        Slant range along the beam, km.
    elevation_deg : float or array_like
        Antenna elevation angle, degrees.
    antenna_height_m : float or array_like
        Antenna height above MSL, meters.

    Returns
    -------
    height : float or ndarray
        Beam height above MSL in km.

    Notes
    -----
    The antenna height is added after removing the effective radius, so a
    zero-range gate sits at the antenna rather than below it.
    """
    s = np.asarray(slant_range_km, dtype=float)
    theta = np.deg2rad(np.asarray(elevation_deg, dtype=float))
    re = EFFECTIVE_RADIUS_KM
    h = np.sqrt(s * s + re * re + 2.0 * s * re * np.sin(theta)) - re + np.asarray(antenna_height_m) / 1000.0
    if np.ndim(h) == 0:
        return float(h)
    return h


def max_analysis_range(elevation_deg, antenna_height_m, ceiling_km, tol_km=1e-6):
    """
    Largest slant range (km) at which the beam stays at or below ``ceiling_km``.

    Found by bisection on :func:`beam_height`; the returned value is the
    lower bracket, so ``beam_height(result) <= ceiling_km`` always holds.
    """
    if ceiling_km <= antenna_height_m / 1000.0:
        raise CeilingBelowAntenna(
            f"ceiling {ceiling_km} km is not above antenna height {antenna_height_m / 1000.0} km"
        )
    if elevation_deg < 0:
        raise ValueError("elevation must be non-negative")
    lo, hi = 0.0, 1.0
    while beam_height(hi, elevation_deg, antenna_height_m) <= ceiling_km:
        lo, hi = hi, hi * 2.0
    while hi - lo > tol_km:
        mid = 0.5 * (lo + hi)
        if beam_height(mid, elevation_deg, antenna_height_m) <= ceiling_km:
            lo = mid
        else:
            hi = mid
    return lo


def destination_point(lat_deg, lon_deg, bearing_deg, distance_km):
    """Great-circle destination on a 6371 km sphere. Broadcasts over arrays."""
    lat1 = np.deg2rad(lat_deg)
    lon1 = np.deg2rad(lon_deg)
    brg = np.deg2rad(bearing_deg)
    delta = np.asarray(distance_km, dtype=float) / EARTH_RADIUS_KM
    sin_lat2 = np.sin(lat1) * np.cos(delta) + np.cos(lat1) * np.sin(delta) * np.cos(brg)
    lat2 = np.arcsin(np.clip(sin_lat2, -1.0, 1.0))
    lon2 = lon1 + np.arctan2(
        np.sin(brg) * np.sin(delta) * np.cos(lat1), np.cos(delta) - np.sin(lat1) * sin_lat2
    )
    lat2 = np.rad2deg(lat2)
    lon2 = (np.rad2deg(lon2) + 540.0) % 360.0 - 180.0
    if np.ndim(lat2) == 0:
        return float(lat2), float(lon2)
    return lat2, lon2


def haversine_km(lat1, lon1, lat2, lon2):
    """Great-circle distance in km between points given in degrees."""
    p1, p2 = np.deg2rad(lat1), np.deg2rad(lat2)
    dlat = p2 - p1
    dlon = np.deg2rad(np.asarray(lon2) - np.asarray(lon1))
    a = np.sin(dlat / 2.0) ** 2 + np.cos(p1) * np.cos(p2) * np.sin(dlon / 2.0) ** 2
    d = 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))
    if np.ndim(d) == 0:
        return float(d)
    return d


def initial_bearing_deg(lat1, lon1, lat2, lon2):
    """Compass bearing (clockwise from north, [0, 360)) from point 1 toward point 2."""
    p1, p2 = np.deg2rad(lat1), np.deg2rad(lat2)
    dlon = np.deg2rad(np.asarray(lon2) - np.asarray(lon1))
    x = np.sin(dlon) * np.cos(p2)
    y = np.cos(p1) * np.sin(p2) - np.sin(p1) * np.cos(p2) * np.cos(dlon)
    b = np.rad2deg(np.arctan2(x, y)) % 360.0
    if np.ndim(b) == 0:
        return float(b)
    return b


def final_bearing_deg(lat1, lon1, lat2, lon2):
    """Bearing of travel on arrival at point 2 along the great circle from point 1."""
    return (initial_bearing_deg(lat2, lon2, lat1, lon1) + 180.0) % 360.0


def gate_geolocate(site: RadarSite, azimuth_deg, elevation_deg, slant_range_m) -> GateGeo:
    """
    Geographic position and height of a single gate.

    The ground distance is the slant range projected with ``cos(elevation)``;
    good enough below ~21 degrees and 150 km.
    """
    if slant_range_m < 0:
        raise ValueError("slant range must be non-negative")
    s_km = slant_range_m / 1000.0
    ground_km = s_km * math.cos(math.radians(elevation_deg))
    if ground_km == 0.0:
        lat, lon = site.latitude_deg, site.longitude_deg
    else:
        lat, lon = destination_point(site.latitude_deg, site.longitude_deg, azimuth_deg, ground_km)
    return GateGeo(
        slant_range_km=s_km,
        azimuth_deg=float(azimuth_deg) % 360.0,
        elevation_deg=float(elevation_deg),
        height_km_msl=beam_height(s_km, elevation_deg, site.antenna_height_m),
        latitude_deg=lat,
        longitude_deg=lon,
    )


def geolocate_gates(site: RadarSite, azimuths_deg, elevation_deg, slant_ranges_m):
    """
    Vectorised :func:`gate_geolocate` over a ray x gate lattice.

    Returns
    -------
    lat, lon, height_km : ndarray
        Arrays of shape ``(len(azimuths_deg), len(slant_ranges_m))``.
    """
    az = np.asarray(azimuths_deg, dtype=float)[:, None]
    s_km = np.asarray(slant_ranges_m, dtype=float)[None, :] / 1000.0
    ground = s_km * math.cos(math.radians(elevation_deg))
    lat, lon = destination_point(site.latitude_deg, site.longitude_deg, az, ground)
    lat = np.broadcast_to(lat, (az.shape[0], s_km.shape[1]))
    lon = np.broadcast_to(lon, (az.shape[0], s_km.shape[1]))
    height = np.broadcast_to(beam_height(s_km, elevation_deg, site.antenna_height_m), lat.shape)
    return np.ascontiguousarray(lat), np.ascontiguousarray(lon), np.ascontiguousarray(height)


def vcp_curves(site: RadarSite, vcp: VcpDefinition, ceiling_km=None):
    """Rows of ``(elevation_deg, range_km, height_km)`` for every sweep and gate."""
    ranges_km = vcp.gate_ranges_m() / 1000.0
    rows = []
    for elev in vcp.elevation_angles_deg:
        heights = beam_height(ranges_km, elev, site.antenna_height_m)
        for r, h in zip(ranges_km, heights):
            if ceiling_km is not None and h > ceiling_km:
                break
            rows.append((elev, float(r), float(h)))
    return rows


LUCKNOW_SITE = RadarSite("LKO", 26.85, 80.95, 128.0, Band.S)
LUCKNOW_VCP = VcpDefinition()
