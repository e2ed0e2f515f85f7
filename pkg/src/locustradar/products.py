"""Composite reflectivity and latitude-aligned vertical cross-sections."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyVolume, LatitudeOutOfCoverage
from .geometry import EARTH_RADIUS_KM, geolocate_gates
from .volume import VolumeScan

KM_PER_DEG = np.pi * EARTH_RADIUS_KM / 180.0
DEFAULT_HEIGHT_EDGES_KM = np.round(np.arange(0.0, 6.0 + 1e-9, 0.1), 10)


@dataclass(frozen=True, eq=False)
class CompositeGrid:
    ray_azimuths_deg: np.ndarray
    values: np.ndarray  # (rays, gates) max Z over sweeps; NaN where no sweep has data


@dataclass(frozen=True, eq=False)
class VerticalSlice:
    latitude_deg: float
    lon_edges_deg: np.ndarray
    height_edges_km: np.ndarray
    values: np.ndarray  # (height bins, lon bins); NaN = no data

    @property
    def lon_centers_deg(self):
        return 0.5 * (self.lon_edges_deg[:-1] + self.lon_edges_deg[1:])

    @property
    def height_centers_km(self):
        return 0.5 * (self.height_edges_km[:-1] + self.height_edges_km[1:])

    def populated_heights_km(self):
        """Lower edges of every height bin holding at least one value."""
        rows = np.flatnonzero(np.any(~np.isnan(self.values), axis=1))
        return self.height_edges_km[rows]


def composite_reflectivity(volume: VolumeScan) -> CompositeGrid:
    if not volume.sweeps:
        raise EmptyVolume("volume has no sweeps")
    base = volume.lowest_sweep
    stack = np.stack([sw.Z for sw in volume.sweeps])
    # fmax ignores NaN unless every operand is NaN
    values = np.fmax.reduce(stack, axis=0)
    return CompositeGrid(base.ray_azimuths_deg.copy(), values)


def vertical_slice(
    volume: VolumeScan,
    latitude_deg: float,
    height_edges_km=DEFAULT_HEIGHT_EDGES_KM,
    dx_km: float = 1.0,
    range_limit_km: float = 150.0,
    min_dbz: float | None = None,
) -> VerticalSlice:
    """
    Maximum reflectivity on a (longitude, height) plane along one latitude.

    Every gate with data, on every sweep, is geolocated; gates within half a
    horizontal bin (``dx_km``) of the slice latitude are binned by longitude
    and height with a cellwise maximum. The horizontal axis spans
    ``range_limit_km`` east and west of the radar.
    """
    site = volume.site
    half_band_deg = 0.5 * dx_km / KM_PER_DEG
    lat_reach_deg = range_limit_km / KM_PER_DEG
    if abs(latitude_deg - site.latitude_deg) > lat_reach_deg:
        raise LatitudeOutOfCoverage(
            f"latitude {latitude_deg} is more than {range_limit_km} km from the radar"
        )
    coslat = np.cos(np.deg2rad(latitude_deg))
    lon_reach_deg = range_limit_km / (KM_PER_DEG * coslat)
    nx = int(np.ceil(2.0 * range_limit_km / dx_km))
    lon_edges = site.longitude_deg - lon_reach_deg + np.arange(nx + 1) * (2.0 * lon_reach_deg / nx)
    h_edges = np.asarray(height_edges_km, dtype=float)
    values = np.full((h_edges.size - 1, nx), np.nan, dtype=np.float32)

    ranges_m = volume.vcp.gate_ranges_m()
    for sw in volume.sweeps:
        z = sw.Z
        has = ~np.isnan(z)
        if min_dbz is not None:
            has &= z >= min_dbz
        if not has.any():
            continue
        lat, lon, h = geolocate_gates(site, sw.ray_azimuths_deg, sw.elevation_deg, ranges_m)
        sel = has & (np.abs(lat - latitude_deg) <= half_band_deg)
        sel &= (lon >= lon_edges[0]) & (lon < lon_edges[-1])
        sel &= (h >= h_edges[0]) & (h < h_edges[-1])
        if not sel.any():
            continue
        xi = np.clip(np.searchsorted(lon_edges, lon[sel], side="right") - 1, 0, nx - 1)
        hi = np.clip(np.searchsorted(h_edges, h[sel], side="right") - 1, 0, h_edges.size - 2)
        np.fmax.at(values, (hi, xi), z[sel])
    return VerticalSlice(float(latitude_deg), lon_edges, h_edges, values)
