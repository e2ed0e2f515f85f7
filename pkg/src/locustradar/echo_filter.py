"""
Threshold filtering and connected-component grouping of radar gates.

A gate survives when its reflectivity is high enough, its radial velocity is
slow enough, and the beam is low enough for a locust swarm to occupy it.
Survivors are grouped into connected components on the (ray, gate) lattice,
with the azimuth seam closed, and components that are too small are dropped.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import datetime

import numpy as np
from scipy import ndimage

from .errors import DimensionMismatch, EmptyVolume, ValidationError
from .geometry import RadarSite, VcpDefinition, beam_height, destination_point, max_analysis_range
from .volume import Sweep, VolumeScan


class Connectivity(str, enum.Enum):
    FOUR = "FOUR"
    EIGHT = "EIGHT"


@dataclass(frozen=True)
class FilterConfig:
    z_min_dbz: float = 15.0
    v_max_abs_ms: float = 6.0
    height_ceiling_km: float = 2.0
    min_cluster_gates: int = 5
    use_spectrum_width: bool = False
    w_max_ms: float | None = None
    connectivity: Connectivity = Connectivity.FOUR
    reject_missing_velocity: bool = True

    def __post_init__(self):
        object.__setattr__(self, "connectivity", Connectivity(self.connectivity))
        if not -35.0 <= self.z_min_dbz <= 80.0:
            raise ValidationError("z_min_dbz must lie in [-35, 80]")
        if not self.v_max_abs_ms > 0:
            raise ValidationError("v_max_abs_ms must be positive")
        if not self.height_ceiling_km > 0:
            raise ValidationError("height_ceiling_km must be positive")
        if int(self.min_cluster_gates) < 1:
            raise ValidationError("min_cluster_gates must be >= 1")
        if self.use_spectrum_width and self.w_max_ms is None:
            raise ValidationError("use_spectrum_width requires w_max_ms")


@dataclass(frozen=True, eq=False)
class EchoCluster:
    """One connected group of retained gates on a sweep."""

    cluster_id: int
    elevation_deg: float
    rays: np.ndarray
    gates: np.ndarray
    mean_reflectivity_dbz: float
    mean_reflectivity_linear_dbz: float
    mean_radial_velocity_ms: float
    centroid_lat_deg: float
    centroid_lon_deg: float
    centroid_height_km: float
    start_time_utc: datetime

    @property
    def gate_count(self) -> int:
        return int(self.rays.size)

    @property
    def gate_list(self):
        return list(zip(self.rays.tolist(), self.gates.tolist()))

    def flat_indices(self, gates_per_ray: int) -> np.ndarray:
        return self.rays.astype(np.int64) * gates_per_ray + self.gates


@dataclass(frozen=True)
class FilterSummary:
    count: int
    total_gates: int
    mean_of_cluster_means_dbz: float
    largest_cluster_id: int | None


def gate_heights_km(site: RadarSite, vcp: VcpDefinition, elevation_deg) -> np.ndarray:
    return beam_height(vcp.gate_ranges_m() / 1000.0, elevation_deg, site.antenna_height_m)


def apply_gate_filters(sweep: Sweep, site: RadarSite, vcp: VcpDefinition, cfg: FilterConfig) -> np.ndarray:
    """
    Boolean retention mask shaped like the sweep's moment grids.

    Missing Z always rejects a gate; missing V rejects it unless
    ``cfg.reject_missing_velocity`` is off. Gates beyond the analysis range
    (the range where the lowest VCP elevation reaches the height ceiling)
    are rejected on every sweep.
    """
    shape = (vcp.rays_per_sweep, vcp.gates_per_ray)
    if sweep.shape != shape:
        raise DimensionMismatch(f"sweep grid {sweep.shape} does not match VCP {shape}")
    z = sweep.Z.astype(np.float64)
    v = sweep.V.astype(np.float64)
    with np.errstate(invalid="ignore"):
        keep = z >= cfg.z_min_dbz
        v_ok = np.abs(v) <= cfg.v_max_abs_ms
        if not cfg.reject_missing_velocity:
            v_ok |= np.isnan(v)
        keep &= v_ok
        if cfg.use_spectrum_width:
            keep &= sweep.W.astype(np.float64) <= cfg.w_max_ms

    ranges_km = vcp.gate_ranges_m() / 1000.0
    heights = beam_height(ranges_km, sweep.elevation_deg, site.antenna_height_m)
    lowest = min(vcp.elevation_angles_deg) if vcp.elevation_angles_deg else sweep.elevation_deg
    limit_km = max_analysis_range(lowest, site.antenna_height_m, cfg.height_ceiling_km)
    gate_ok = (heights <= cfg.height_ceiling_km) & (ranges_km <= limit_km)
    keep &= gate_ok[None, :]
    return keep


def _structure(connectivity):
    if Connectivity(connectivity) is Connectivity.EIGHT:
        return np.ones((3, 3), dtype=bool)
    return ndimage.generate_binary_structure(2, 1)


def label_mask(mask, connectivity=Connectivity.FOUR):
    """
    Label connected components, closing the lattice at the azimuth seam.

    Returns
    -------
    labels : ndarray of int
        0 for background, 1..n for components (numbered in raster order of
        their first gate).
    n : int
    """
    mask = np.asarray(mask, dtype=bool)
    labels, n = ndimage.label(mask, structure=_structure(connectivity))
    rays = mask.shape[0]
    if n == 0 or rays < 3:
        return labels, n

    parent = np.arange(n + 1)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    first, last = labels[0], labels[-1]
    pairs = [(first, last)]
    if Connectivity(connectivity) is Connectivity.EIGHT:
        pairs.append((first[:-1], last[1:]))
        pairs.append((first[1:], last[:-1]))
    merged = False
    for a_row, b_row in pairs:
        both = (a_row > 0) & (b_row > 0)
        for a, b in zip(a_row[both], b_row[both]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
                merged = True
    if not merged:
        return labels, n
    roots = np.array([find(i) for i in range(n + 1)])
    # renumber so labels stay dense and ordered by first appearance
    unique_roots, first_seen = np.unique(roots[labels[mask]], return_index=True)
    order = unique_roots[np.argsort(first_seen)]
    remap = np.zeros(n + 1, dtype=labels.dtype)
    remap[order] = np.arange(1, order.size + 1)
    return remap[roots][labels], int(order.size)


def label_clusters(mask, connectivity=Connectivity.FOUR):
    """
    Partition retained gates into maximal connected components.

    Returns a list of ``(k, 2)`` integer arrays of ``(ray, gate)`` pairs in
    raster order; components are ordered by their first gate.
    """
    labels, n = label_mask(mask, connectivity)
    if n == 0:
        return []
    flat = labels.ravel()
    idx = np.flatnonzero(flat)
    lab = flat[idx]
    order = np.argsort(lab, kind="stable")
    idx, lab = idx[order], lab[order]
    splits = np.flatnonzero(np.diff(lab)) + 1
    groups = np.split(idx, splits)
    width = labels.shape[1]
    comps = [np.column_stack(np.divmod(g, width)) for g in groups]
    comps.sort(key=lambda c: (c[0, 0], c[0, 1]))
    return comps


def _linear_mean_dbz(z):
    return float(10.0 * np.log10(np.mean(10.0 ** (z / 10.0))))


def extract_clusters(volume: VolumeScan, cfg: FilterConfig = FilterConfig()) -> list[EchoCluster]:
    """
    Detect echo clusters on the lowest-elevation sweep of ``volume``.

    Clusters are returned largest first; equal sizes are ordered by their
    first ``(ray, gate)``. ``cluster_id`` is the position in that order.
    """
    if not volume.sweeps:
        raise EmptyVolume("volume has no sweeps")
    sweep = volume.lowest_sweep
    site, vcp = volume.site, volume.vcp
    mask = apply_gate_filters(sweep, site, vcp, cfg)
    comps = [c for c in label_clusters(mask, cfg.connectivity) if len(c) >= cfg.min_cluster_gates]
    comps.sort(key=lambda c: (-len(c), c[0, 0], c[0, 1]))

    ranges_m = vcp.gate_ranges_m()
    heights = gate_heights_km(site, vcp, sweep.elevation_deg)
    cos_el = np.cos(np.deg2rad(sweep.elevation_deg))
    clusters = []
    for cid, comp in enumerate(comps):
        rays, gates = comp[:, 0], comp[:, 1]
        z = sweep.Z[rays, gates].astype(np.float64)
        v = sweep.V[rays, gates].astype(np.float64)
        lat, lon = destination_point(
            site.latitude_deg,
            site.longitude_deg,
            sweep.ray_azimuths_deg[rays],
            ranges_m[gates] / 1000.0 * cos_el,
        )
        clusters.append(
            EchoCluster(
                cluster_id=cid,
                elevation_deg=sweep.elevation_deg,
                rays=rays.copy(),
                gates=gates.copy(),
                mean_reflectivity_dbz=float(np.mean(z)),
                mean_reflectivity_linear_dbz=_linear_mean_dbz(z),
                mean_radial_velocity_ms=float(np.nanmean(v)) if np.any(~np.isnan(v)) else float("nan"),
                centroid_lat_deg=float(np.mean(lat)),
                centroid_lon_deg=float(np.mean(lon)),
                centroid_height_km=float(np.mean(heights[gates])),
                start_time_utc=volume.start_time_utc,
            )
        )
    return clusters


def filter_summary(clusters) -> FilterSummary:
    clusters = list(clusters)
    if not clusters:
        return FilterSummary(0, 0, 0.0, None)
    largest = min(clusters, key=lambda c: (-c.gate_count, c.cluster_id))
    return FilterSummary(
        count=len(clusters),
        total_gates=sum(c.gate_count for c in clusters),
        mean_of_cluster_means_dbz=float(np.mean([c.mean_reflectivity_dbz for c in clusters])),
        largest_cluster_id=largest.cluster_id,
    )
