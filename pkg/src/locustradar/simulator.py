"""
Synthetic volume-scan scenes with exact ground truth.

Swarms and storms are vertical cylinders (a disk footprint times a height
span) moving along great circles at constant speed. A gate belongs to an
object when its beam-centre position lies inside the cylinder. Radial
velocity is the signed projection of the object's ground velocity on the
outward beam direction. Optional speckle noise fills empty gates.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timedelta, timezone

import numpy as np

from .ancillary import WindField
from .errors import SpecError, TimeMismatch
from .geometry import (
    LUCKNOW_SITE,
    RadarSite,
    VcpDefinition,
    destination_point,
    final_bearing_deg,
    geolocate_gates,
    haversine_km,
)
from .svol import quantize, write_volume
from .volume import MOMENT_LIMITS, Sweep, VolumeScan, format_utc, parse_utc

SWARM_CEILING_KM = 2.0
SWARM_DEPTH_RANGE_M = (50.0, 150.0)
SWARM_SPEED_RANGE_MS = (4.4, 5.3)
STORM_SPEED_RANGE_MS = (3.0, 4.0)
STORM_MAX_TOP_KM = 5.0


@dataclass(frozen=True)
class SwarmSpec:
    latitude_deg: float
    longitude_deg: float
    layer_base_km: float = 0.5
    layer_depth_m: float | None = None
    radius_km: float | None = None
    mean_dbz: float = 27.11
    dbz_spread: float = 3.0
    ground_speed_ms: float | None = None
    heading_deg: float = 0.0
    target_gate_count: int | None = None

    def check(self):
        if self.layer_depth_m is not None:
            if self.layer_depth_m <= 0:
                raise SpecError("layer_depth_m must be positive")
            if self.layer_base_km + self.layer_depth_m / 1000.0 > SWARM_CEILING_KM + 1e-12:
                raise SpecError("swarm layer top must not exceed 2 km")
        elif self.layer_base_km + SWARM_DEPTH_RANGE_M[1] / 1000.0 > SWARM_CEILING_KM:
            raise SpecError("layer base leaves no room for a default-depth layer below 2 km")
        if self.layer_base_km < 0:
            raise SpecError("layer_base_km must be non-negative")
        if self.ground_speed_ms is not None and self.ground_speed_ms < 0:
            raise SpecError("ground_speed_ms must be non-negative")
        if self.radius_km is None and self.target_gate_count is None:
            raise SpecError("swarm needs radius_km or target_gate_count")
        if self.radius_km is not None and self.radius_km <= 0:
            raise SpecError("radius_km must be positive")
        if self.target_gate_count is not None and self.target_gate_count < 1:
            raise SpecError("target_gate_count must be >= 1")
        if self.dbz_spread < 0:
            raise SpecError("dbz_spread must be non-negative")
        _check_dbz_band(self.mean_dbz - self.dbz_spread, self.mean_dbz + self.dbz_spread)


@dataclass(frozen=True)
class StormSpec:
    latitude_deg: float
    longitude_deg: float
    top_km: float = 4.5
    core_dbz: float = 45.0
    radius_km: float = 10.0
    speed_ms: float = 3.5
    heading_deg: float = 0.0

    def check(self):
        if not 2.0 < self.top_km <= STORM_MAX_TOP_KM:
            raise SpecError("storm top must lie in (2, 5] km")
        if self.core_dbz < 35.0:
            raise SpecError("storm core must be at least 35 dBZ")
        if not STORM_SPEED_RANGE_MS[0] <= self.speed_ms <= STORM_SPEED_RANGE_MS[1]:
            raise SpecError("storm speed must lie in [3, 4] m/s")
        if self.radius_km <= 0:
            raise SpecError("radius_km must be positive")
        _check_dbz_band(self.core_dbz - STORM_EDGE_DROP_DB - 1.0, self.core_dbz + 1.0)


STORM_EDGE_DROP_DB = 12.0


@dataclass(frozen=True)
class NoiseSpec:
    probability: float = 0.0
    dbz_range: tuple = (-10.0, 10.0)

    def check(self):
        if not 0.0 <= self.probability <= 1.0:
            raise SpecError("noise probability must lie in [0, 1]")
        lo, hi = self.dbz_range
        if lo > hi:
            raise SpecError("noise dbz_range is reversed")
        _check_dbz_band(lo, hi)


def _check_dbz_band(lo, hi):
    zlo, zhi = MOMENT_LIMITS["Z"]
    if lo < zlo or hi > zhi:
        raise SpecError(f"reflectivity band [{lo}, {hi}] leaves [{zlo}, {zhi}] dBZ")


@dataclass(frozen=True)
class SceneSpec:
    site: RadarSite = LUCKNOW_SITE
    vcp: VcpDefinition = VcpDefinition()
    start_time_utc: datetime = datetime(2020, 7, 12, 2, 32, 10, tzinfo=timezone.utc)
    n_volumes: int = 54
    cadence_s: float = 600.0
    swarms: tuple = ()
    storms: tuple = ()
    noise: NoiseSpec = NoiseSpec()
    rng_seed: int = 0
    end_time_utc: datetime | None = None

    def check(self):
        if self.n_volumes < 1:
            raise SpecError("n_volumes must be >= 1")
        if not self.cadence_s > 0:
            raise SpecError("cadence_s must be positive")
        if self.end_time_utc is not None and self.n_volumes > 1:
            if self.end_time_utc <= self.start_time_utc:
                raise SpecError("end_time_utc must follow start_time_utc")
            span = (self.end_time_utc - self.start_time_utc).total_seconds()
            if span < self.n_volumes - 1:
                raise SpecError("end_time_utc leaves less than one second between volumes")
        for obj in (*self.swarms, *self.storms):
            obj.check()
        self.noise.check()

    def volume_times(self):
        """Volume start times; with ``end_time_utc`` they are spread evenly, rounded to whole seconds."""
        t0 = self.start_time_utc
        if self.end_time_utc is not None and self.n_volumes > 1:
            span = (self.end_time_utc - t0).total_seconds()
            return [t0 + timedelta(seconds=round(i * span / (self.n_volumes - 1))) for i in range(self.n_volumes)]
        return [t0 + timedelta(seconds=i * self.cadence_s) for i in range(self.n_volumes)]


@dataclass(frozen=True, eq=False)
class ObjectTruth:
    object_id: str
    kind: str  # "swarm" | "storm" | "noise"
    center_lat_deg: float | None
    center_lon_deg: float | None
    sweep_gates: tuple  # one flat-index array (ray * gates_per_ray + gate) per sweep

    def gates_on(self, sweep_index: int) -> np.ndarray:
        return self.sweep_gates[sweep_index]


@dataclass(frozen=True, eq=False)
class VolumeTruth:
    time_utc: datetime
    sweep_elevations_deg: tuple
    gates_per_ray: int
    objects: tuple

    def by_kind(self, kind):
        return [o for o in self.objects if o.kind == kind]

    def sweep_index(self, elevation_deg):
        diffs = [abs(e - elevation_deg) for e in self.sweep_elevations_deg]
        return int(np.argmin(diffs))


@dataclass
class GroundTruth:
    volumes: list = field(default_factory=list)
    resolved_swarms: tuple = ()


@dataclass(frozen=True)
class ResolvedSwarm:
    object_id: str
    spec: SwarmSpec
    layer_depth_m: float
    ground_speed_ms: float
    radius_km: float

    @property
    def base_km(self):
        return self.spec.layer_base_km

    @property
    def top_km(self):
        return self.spec.layer_base_km + self.layer_depth_m / 1000.0


class _Geometry:
    """Per-sweep gate positions, shared by every volume of a scene."""

    def __init__(self, site, vcp):
        self.site, self.vcp = site, vcp
        self.azimuths = vcp.default_azimuths_deg()
        ranges_m = vcp.gate_ranges_m()
        self.heights, self.lat, self.lon, self.outward = [], [], [], []
        for elev in vcp.elevation_angles_deg:
            lat, lon, h = geolocate_gates(site, self.azimuths, elev, ranges_m)
            self.lat.append(lat)
            self.lon.append(lon)
            self.heights.append(h[0])
            outward = final_bearing_deg(site.latitude_deg, site.longitude_deg, lat, lon)
            # the first gate may sit on the antenna itself
            outward = np.where(ranges_m[None, :] > 0, outward, self.azimuths[:, None])
            self.outward.append(outward)

    def span(self, sweep, lo_km, hi_km):
        """Contiguous gate-index range whose beam height lies in ``[lo_km, hi_km]``."""
        h = self.heights[sweep]
        inside = np.flatnonzero((h >= lo_km) & (h <= hi_km))
        if inside.size == 0:
            return 0, 0
        return int(inside[0]), int(inside[-1]) + 1


def _object_position(lat, lon, heading, speed_ms, elapsed_s):
    dist_km = speed_ms * elapsed_s / 1000.0
    if dist_km == 0:
        return lat, lon, heading
    lat2, lon2 = destination_point(lat, lon, heading, dist_km)
    local_heading = final_bearing_deg(lat, lon, lat2, lon2)
    return lat2, lon2, local_heading


def _resolve_swarms(spec: SceneSpec):
    out = []
    for i, sw in enumerate(spec.swarms):
        rng = np.random.default_rng([spec.rng_seed, 7, i])
        depth = sw.layer_depth_m if sw.layer_depth_m is not None else float(rng.uniform(*SWARM_DEPTH_RANGE_M))
        speed = sw.ground_speed_ms if sw.ground_speed_ms is not None else float(rng.uniform(*SWARM_SPEED_RANGE_MS))
        out.append(ResolvedSwarm(f"swarm-{i}", sw, depth, speed, sw.radius_km or 0.0))
    return out


def _size_swarm(rs: ResolvedSwarm, geo: _Geometry, times, t0):
    """Radius giving a mean lowest-sweep gate count equal to the target over the scene."""
    sw = rs.spec
    g0, g1 = geo.span(0, rs.base_km, rs.top_km)
    if g1 == g0:
        raise SpecError(f"{rs.object_id}: layer is never intersected by the lowest sweep")
    dists = []
    for t in times:
        lat, lon, _ = _object_position(
            sw.latitude_deg, sw.longitude_deg, sw.heading_deg, rs.ground_speed_ms, (t - t0).total_seconds()
        )
        d = haversine_km(lat, lon, geo.lat[0][:, g0:g1], geo.lon[0][:, g0:g1]).ravel()
        dists.append(d)
    pooled = np.sort(np.concatenate(dists))
    k = int(round(sw.target_gate_count * len(times)))
    if k > pooled.size:
        raise SpecError(f"{rs.object_id}: target_gate_count unreachable inside the layer footprint")
    if k == pooled.size:
        return float(pooled[-1]) + 1e-6
    return float(0.5 * (pooled[k - 1] + pooled[k]))


def _storm_z(core, d_frac, rng, n):
    return core - STORM_EDGE_DROP_DB * d_frac**2 + rng.uniform(-1.0, 1.0, n)


class SceneSimulator:
    """Iterates the volumes of a :class:`SceneSpec` one at a time."""

    def __init__(self, spec: SceneSpec):
        spec.check()
        self.spec = spec
        self.times = spec.volume_times()
        self.geo = _Geometry(spec.site, spec.vcp)
        swarms = _resolve_swarms(spec)
        resolved = []
        for rs in swarms:
            if rs.spec.target_gate_count is not None:
                rs = replace(rs, radius_km=_size_swarm(rs, self.geo, self.times, self.times[0]))
            resolved.append(rs)
        self.swarms = tuple(resolved)

    def __len__(self):
        return len(self.times)

    def __iter__(self):
        for i in range(len(self.times)):
            yield self.volume(i)

    def volume(self, index):
        """Return ``(VolumeScan, VolumeTruth)`` for volume ``index``."""
        spec, geo = self.spec, self.geo
        t = self.times[index]
        elapsed = (t - self.times[0]).total_seconds()
        rng = np.random.default_rng([spec.rng_seed, 1, index])
        vcp = spec.vcp
        shape = (vcp.rays_per_sweep, vcp.gates_per_ray)
        n_sweeps = len(vcp.elevation_angles_deg)
        Z = [np.full(shape, np.nan) for _ in range(n_sweeps)]
        V = [np.full(shape, np.nan) for _ in range(n_sweeps)]
        W = [np.full(shape, np.nan) for _ in range(n_sweeps)]
        owner = [np.full(shape, -1, dtype=np.int16) for _ in range(n_sweeps)]
        objects = []

        def paint(k, lat_c, lon_c, radius, lo_km, hi_km, heading, speed, fill):
            for s in range(n_sweeps):
                g0, g1 = geo.span(s, lo_km, hi_km)
                if g1 == g0:
                    continue
                d = haversine_km(lat_c, lon_c, geo.lat[s][:, g0:g1], geo.lon[s][:, g0:g1])
                inside = d <= radius
                n = int(inside.sum())
                if n == 0:
                    continue
                rr, gg = np.nonzero(inside)
                gg = gg + g0
                z = fill(d[inside] / radius, n)
                cos_el = math.cos(math.radians(vcp.elevation_angles_deg[s]))
                v = speed * np.cos(np.deg2rad(heading - geo.outward[s][rr, gg])) * cos_el
                Z[s][rr, gg] = z
                V[s][rr, gg] = np.trunc(v * 100.0) / 100.0
                W[s][rr, gg] = rng.uniform(0.5, 1.5, n)
                owner[s][rr, gg] = k

        for k, rs in enumerate(self.swarms):
            sw = rs.spec
            lat_c, lon_c, heading = _object_position(
                sw.latitude_deg, sw.longitude_deg, sw.heading_deg, rs.ground_speed_ms, elapsed
            )
            objects.append((rs.object_id, "swarm", lat_c, lon_c))
            lo, hi = sw.mean_dbz - sw.dbz_spread, sw.mean_dbz + sw.dbz_spread
            paint(k, lat_c, lon_c, rs.radius_km, rs.base_km, rs.top_km, heading, rs.ground_speed_ms,
                  lambda frac, n: rng.uniform(lo, hi, n))
        for j, st in enumerate(spec.storms):
            k = len(self.swarms) + j
            lat_c, lon_c, heading = _object_position(
                st.latitude_deg, st.longitude_deg, st.heading_deg, st.speed_ms, elapsed
            )
            objects.append((f"storm-{j}", "storm", lat_c, lon_c))
            paint(k, lat_c, lon_c, st.radius_km, -np.inf, st.top_km, heading, st.speed_ms,
                  lambda frac, n, core=st.core_dbz: _storm_z(core, frac, rng, n))

        noise_k = len(objects)
        if spec.noise.probability > 0:
            lo, hi = spec.noise.dbz_range
            for s in range(n_sweeps):
                hit = (rng.random(shape) < spec.noise.probability) & (owner[s] < 0)
                n = int(hit.sum())
                Z[s][hit] = rng.uniform(lo, hi, n)
                V[s][hit] = rng.uniform(-20.0, 20.0, n)
                W[s][hit] = rng.uniform(0.0, 8.0, n)
                owner[s][hit] = noise_k

        sweeps = []
        for s, elev in enumerate(vcp.elevation_angles_deg):
            z = np.clip(Z[s], *MOMENT_LIMITS["Z"])
            sweeps.append(Sweep(elev, geo.azimuths, quantize(z), quantize(V[s]), quantize(W[s])))
        volume = VolumeScan(spec.site, vcp, t, tuple(sweeps)).validate()

        truth_objects = []
        for k, (oid, kind, lat_c, lon_c) in enumerate(objects):
            gates = tuple(np.flatnonzero(owner[s].ravel() == k) for s in range(n_sweeps))
            truth_objects.append(ObjectTruth(oid, kind, lat_c, lon_c, gates))
        if spec.noise.probability > 0:
            gates = tuple(np.flatnonzero(owner[s].ravel() == noise_k) for s in range(n_sweeps))
            truth_objects.append(ObjectTruth("noise", "noise", None, None, gates))
        truth = VolumeTruth(t, tuple(vcp.elevation_angles_deg), vcp.gates_per_ray, tuple(truth_objects))
        return volume, truth


def iter_scene(spec: SceneSpec):
    """Yield ``(VolumeScan, VolumeTruth)`` pairs without holding the whole scene."""
    yield from SceneSimulator(spec)


def simulate_scene(spec: SceneSpec):
    """Materialise every volume of ``spec``; returns ``(volumes, GroundTruth)``."""
    sim = SceneSimulator(spec)
    volumes, truth = [], GroundTruth(resolved_swarms=sim.swarms)
    for vol, vt in sim:
        volumes.append(vol)
        truth.volumes.append(vt)
    return volumes, truth


@dataclass(frozen=True)
class ClassScore:
    true_positive: int
    false_positive: int
    false_negative: int
    precision: float
    recall: float


def score_detection(truth: VolumeTruth, clusters) -> dict:
    """
    Gate-level scoring of detected clusters against simulator truth.

    Returns ``{"swarm": ClassScore, "storm": int, "noise": int}`` where the
    integers count storm / noise gates that were retained in clusters (they
    are also counted as swarm false positives). With no detections precision
    is 0.
    """
    clusters = list(clusters)
    if any(c.start_time_utc != truth.time_utc for c in clusters):
        raise TimeMismatch("clusters and truth come from different volumes")
    detected_by_sweep = {}
    for c in clusters:
        s = truth.sweep_index(c.elevation_deg)
        detected_by_sweep.setdefault(s, []).append(c.flat_indices(truth.gates_per_ray))
    sweeps = sorted(detected_by_sweep) or [0]

    def truth_set(kind, s):
        parts = [o.gates_on(s) for o in truth.by_kind(kind)]
        return np.unique(np.concatenate(parts)) if parts else np.array([], dtype=np.int64)

    tp = fp = fn = storm = noise = 0
    for s in sweeps:
        detected = np.unique(np.concatenate(detected_by_sweep.get(s, [np.array([], dtype=np.int64)])))
        swarm_gates = truth_set("swarm", s)
        hit = np.intersect1d(detected, swarm_gates, assume_unique=True).size
        tp += hit
        fp += detected.size - hit
        fn += swarm_gates.size - hit
        storm += np.intersect1d(detected, truth_set("storm", s), assume_unique=True).size
        noise += np.intersect1d(detected, truth_set("noise", s), assume_unique=True).size
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return {"swarm": ClassScore(tp, fp, fn, precision, recall), "storm": storm, "noise": noise}


# -- serialisation -----------------------------------------------------------------


def _site_dict(site):
    return {
        "site_id": site.site_id,
        "latitude_deg": site.latitude_deg,
        "longitude_deg": site.longitude_deg,
        "antenna_height_m": site.antenna_height_m,
        "band": site.band.value,
    }


def _vcp_dict(vcp):
    d = asdict(vcp)
    d["elevation_angles_deg"] = list(vcp.elevation_angles_deg)
    return d


def scene_to_dict(spec: SceneSpec) -> dict:
    return {
        "site": _site_dict(spec.site),
        "vcp": _vcp_dict(spec.vcp),
        "start_time_utc": format_utc(spec.start_time_utc),
        "end_time_utc": format_utc(spec.end_time_utc) if spec.end_time_utc else None,
        "n_volumes": spec.n_volumes,
        "cadence_s": spec.cadence_s,
        "swarms": [asdict(s) for s in spec.swarms],
        "storms": [asdict(s) for s in spec.storms],
        "noise": {"probability": spec.noise.probability, "dbz_range": list(spec.noise.dbz_range)},
        "rng_seed": spec.rng_seed,
    }


def scene_from_dict(d: dict) -> SceneSpec:
    known = {"site", "vcp", "start_time_utc", "end_time_utc", "n_volumes", "cadence_s",
             "swarms", "storms", "noise", "rng_seed"}
    unknown = set(d) - known
    if unknown:
        raise SpecError(f"unknown scene keys: {', '.join(sorted(unknown))}")
    try:
        site = RadarSite(**{**_site_dict(LUCKNOW_SITE), **d.get("site", {})})
        vcp_d = dict(d.get("vcp", {}))
        if "elevation_angles_deg" in vcp_d:
            vcp_d["elevation_angles_deg"] = tuple(vcp_d["elevation_angles_deg"])
        vcp = VcpDefinition(**vcp_d)
        noise_d = dict(d.get("noise", {}))
        if "dbz_range" in noise_d:
            noise_d["dbz_range"] = tuple(noise_d["dbz_range"])
        spec = SceneSpec(
            site=site,
            vcp=vcp,
            start_time_utc=parse_utc(d["start_time_utc"]) if "start_time_utc" in d else SceneSpec.start_time_utc,
            end_time_utc=parse_utc(d["end_time_utc"]) if d.get("end_time_utc") else None,
            n_volumes=int(d.get("n_volumes", 54)),
            cadence_s=float(d.get("cadence_s", 600.0)),
            swarms=tuple(SwarmSpec(**s) for s in d.get("swarms", [])),
            storms=tuple(StormSpec(**s) for s in d.get("storms", [])),
            noise=NoiseSpec(**noise_d),
            rng_seed=int(d.get("rng_seed", 0)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(str(exc)) from None
    spec.check()
    return spec


def truth_to_dict(truth: GroundTruth) -> dict:
    return {
        "resolved_swarms": [
            {
                "object_id": rs.object_id,
                "layer_base_km": rs.base_km,
                "layer_depth_m": rs.layer_depth_m,
                "ground_speed_ms": rs.ground_speed_ms,
                "radius_km": rs.radius_km,
            }
            for rs in truth.resolved_swarms
        ],
        "volumes": [volume_truth_to_dict(vt) for vt in truth.volumes],
    }


def volume_truth_to_dict(vt: VolumeTruth) -> dict:
    return {
        "time_utc": format_utc(vt.time_utc),
        "gates_per_ray": vt.gates_per_ray,
        "sweep_elevations_deg": list(vt.sweep_elevations_deg),
        "objects": [
            {
                "object_id": o.object_id,
                "kind": o.kind,
                "center_lat_deg": o.center_lat_deg,
                "center_lon_deg": o.center_lon_deg,
                "sweeps": [g.tolist() for g in o.sweep_gates],
            }
            for o in vt.objects
        ],
    }


def volume_truth_from_dict(d: dict) -> VolumeTruth:
    return VolumeTruth(
        time_utc=parse_utc(d["time_utc"]),
        sweep_elevations_deg=tuple(d["sweep_elevations_deg"]),
        gates_per_ray=int(d["gates_per_ray"]),
        objects=tuple(
            ObjectTruth(
                o["object_id"],
                o["kind"],
                o["center_lat_deg"],
                o["center_lon_deg"],
                tuple(np.asarray(g, dtype=np.int64) for g in o["sweeps"]),
            )
            for o in d["objects"]
        ),
    )


def volume_filename(volume: VolumeScan) -> str:
    return f"{volume.site.site_id}_{volume.start_time_utc.strftime('%Y%m%dT%H%M%SZ')}.svol"


def write_scene(spec: SceneSpec, out_dir, provenance=None) -> list:
    """Simulate ``spec`` into ``out_dir``: SVOL files, ``truth.json`` and ``scene.json``."""
    os.makedirs(out_dir, exist_ok=True)
    sim = SceneSimulator(spec)
    paths = []
    truth = GroundTruth(resolved_swarms=sim.swarms)
    for vol, vt in sim:
        path = os.path.join(out_dir, volume_filename(vol))
        write_volume(vol, path)
        paths.append(path)
        truth.volumes.append(vt)
    with open(os.path.join(out_dir, "truth.json"), "w", encoding="utf-8") as fh:
        json.dump(truth_to_dict(truth), fh, sort_keys=True, separators=(",", ":"))
    echo = {"scene": scene_to_dict(spec)}
    if provenance is not None:
        echo["provenance"] = provenance
    with open(os.path.join(out_dir, "scene.json"), "w", encoding="utf-8") as fh:
        json.dump(echo, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return paths


# -- presets -----------------------------------------------------------------------


def lucknow_20200712(n_volumes: int = 54, noise_probability: float = 0.002, rng_seed: int = 20200712) -> SceneSpec:
    """
    Synthetic stand-in for the 12 July 2020 Lucknow swarm.

    One swarm, sized to an average of 2880 lowest-sweep gates at 27.11 dBZ,
    flies 3.47 m/s on a heading of 95 degrees from ~110 km west-north-west of
    the radar, observed from 02:32:10 to 11:32:09 UTC. The layer spans
    0-1.95 km so the lowest sweep samples the whole footprint at every range
    the swarm visits; speckle noise stays below the reflectivity threshold.
    """
    site = LUCKNOW_SITE
    start = datetime(2020, 7, 12, 2, 32, 10, tzinfo=timezone.utc)
    end = datetime(2020, 7, 12, 11, 32, 9, tzinfo=timezone.utc)
    # 95 km west, 55 km north of the radar
    bearing = math.degrees(math.atan2(-95.0, 55.0)) % 360.0
    lat, lon = destination_point(site.latitude_deg, site.longitude_deg, bearing, math.hypot(95.0, 55.0))
    if n_volumes != 54:
        span = (end - start).total_seconds() * (n_volumes - 1) / 53.0
        end = start + timedelta(seconds=round(span))
    swarm = SwarmSpec(
        latitude_deg=round(lat, 6),
        longitude_deg=round(lon, 6),
        layer_base_km=0.0,
        layer_depth_m=1950.0,
        mean_dbz=27.11,
        dbz_spread=3.0,
        ground_speed_ms=3.47,
        heading_deg=95.0,
        target_gate_count=2880,
    )
    return SceneSpec(
        site=site,
        vcp=VcpDefinition(),
        start_time_utc=start,
        end_time_utc=end if n_volumes > 1 else None,
        n_volumes=n_volumes,
        cadence_s=600.0,
        swarms=(swarm,),
        noise=NoiseSpec(noise_probability, (-10.0, 10.0)),
        rng_seed=rng_seed,
    )


def empty_scene(n_volumes: int = 3) -> SceneSpec:
    return SceneSpec(n_volumes=n_volumes, rng_seed=0)


PRESETS = {
    "lucknow_20200712": lucknow_20200712,
    "empty": empty_scene,
}


def uniform_wind_field(site: RadarSite, u_ms, v_ms, valid_time_utc, radius_km=150.0, cell_deg=0.25, level_hpa=850.0):
    """A 0.25-degree grid of constant wind covering ``radius_km`` around the site."""
    km_per_deg = math.pi * 6371.0 / 180.0
    dlat = radius_km / km_per_deg
    dlon = radius_km / (km_per_deg * math.cos(math.radians(site.latitude_deg)))
    lat0 = math.floor((site.latitude_deg - dlat) / cell_deg) * cell_deg
    lon0 = math.floor((site.longitude_deg - dlon) / cell_deg) * cell_deg
    ny = int(math.ceil((site.latitude_deg + dlat - lat0) / cell_deg)) + 1
    nx = int(math.ceil((site.longitude_deg + dlon - lon0) / cell_deg)) + 1
    return WindField(
        grid_lat0_deg=round(lat0, 10),
        grid_lon0_deg=round(lon0, 10),
        cell_deg=cell_deg,
        nx=nx,
        ny=ny,
        u_ms=np.full((ny, nx), float(u_ms)),
        v_ms=np.full((ny, nx), float(v_ms)),
        level_hpa=level_hpa,
        valid_time_utc=valid_time_utc,
    )
