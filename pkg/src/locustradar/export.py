"""CSV (RFC 4180) and GeoJSON (RFC 7946) writers and readers for pipeline products.

CSV files open with a single ``# provenance: {...}`` comment line carrying the
tool version and effective configuration; readers skip ``#`` lines.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .geometry import RadarSite, VcpDefinition
from .tracker import Observation, SwarmTrack, TrackStatus
from .volume import format_utc, parse_utc

CLUSTER_COLUMNS = [
    "time_utc",
    "cluster_id",
    "elevation_deg",
    "gate_count",
    "mean_dbz",
    "mean_dbz_linear",
    "mean_radial_velocity_ms",
    "centroid_lat_deg",
    "centroid_lon_deg",
    "centroid_height_km",
]

TRACK_COLUMNS = [
    "track_id",
    "status",
    "n_observations",
    "first_time_utc",
    "last_time_utc",
    "duration_s",
    "path_length_km",
    "net_displacement_km",
    "mean_speed_ms",
    "net_speed_ms",
    "heading_deg",
]


def clean(value):
    """JSON-safe scalar: NaN and infinities become ``None``."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def write_csv(path, columns, rows, provenance=None):
    buf = io.StringIO()
    if provenance is not None:
        buf.write("# provenance: " + json.dumps(provenance, sort_keys=True, separators=(",", ":")) + "\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def read_csv(path):
    """Return ``(provenance, rows)``; rows are dicts of strings."""
    provenance = None
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("# provenance: ") and provenance is None and not body:
            provenance = json.loads(line[len("# provenance: "):])
        elif not line.startswith("#"):
            body.append(line)
    return provenance, list(csv.DictReader(body))


def _fmt(x):
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))


def cluster_rows(clusters):
    for c in clusters:
        yield [
            format_utc(c.start_time_utc),
            c.cluster_id,
            _fmt(c.elevation_deg),
            c.gate_count,
            _fmt(c.mean_reflectivity_dbz),
            _fmt(c.mean_reflectivity_linear_dbz),
            _fmt(c.mean_radial_velocity_ms),
            _fmt(c.centroid_lat_deg),
            _fmt(c.centroid_lon_deg),
            _fmt(c.centroid_height_km),
        ]


def write_clusters_csv(clusters, path, provenance=None):
    write_csv(path, CLUSTER_COLUMNS, cluster_rows(clusters), provenance)


def clusters_geojson(clusters, provenance=None):
    features = []
    for c in clusters:
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [c.centroid_lon_deg, c.centroid_lat_deg]},
                "properties": {
                    "time_utc": format_utc(c.start_time_utc),
                    "cluster_id": c.cluster_id,
                    "elevation_deg": c.elevation_deg,
                    "gate_count": c.gate_count,
                    "mean_dbz": clean(c.mean_reflectivity_dbz),
                    "mean_radial_velocity_ms": clean(c.mean_radial_velocity_ms),
                    "centroid_height_km": c.centroid_height_km,
                },
            }
        )
    fc = {"type": "FeatureCollection", "features": features}
    if provenance is not None:
        fc["provenance"] = provenance
    return fc


def site_to_dict(site: RadarSite):
    return {
        "site_id": site.site_id,
        "latitude_deg": site.latitude_deg,
        "longitude_deg": site.longitude_deg,
        "antenna_height_m": site.antenna_height_m,
        "band": site.band.value,
    }


def vcp_to_dict(vcp: VcpDefinition):
    return {
        "elevation_angles_deg": list(vcp.elevation_angles_deg),
        "cadence_s": vcp.cadence_s,
        "first_gate_range_m": vcp.first_gate_range_m,
        "gate_spacing_m": vcp.gate_spacing_m,
        "gates_per_ray": vcp.gates_per_ray,
        "rays_per_sweep": vcp.rays_per_sweep,
    }


def track_summary(track: SwarmTrack):
    """Flat kinematics record; single-observation tracks get zero motion."""
    obs = track.observations
    base = {
        "track_id": track.track_id,
        "status": track.status.value,
        "n_observations": len(obs),
        "first_time_utc": format_utc(obs[0].time_utc),
        "last_time_utc": format_utc(obs[-1].time_utc),
    }
    if len(obs) >= 2:
        k = track.kinematics()
        base.update(
            duration_s=k.duration_s,
            path_length_km=k.path_length_km,
            net_displacement_km=k.net_displacement_km,
            mean_speed_ms=k.mean_speed_ms,
            net_speed_ms=k.net_speed_ms,
            heading_deg=k.mean_heading_deg,
        )
    else:
        base.update(
            duration_s=0.0,
            path_length_km=0.0,
            net_displacement_km=0.0,
            mean_speed_ms=None,
            net_speed_ms=None,
            heading_deg=None,
        )
    return base


def write_tracks_csv(tracks, path, provenance=None):
    rows = []
    for t in tracks:
        s = track_summary(t)
        rows.append([s[c] if not isinstance(s[c], float) else _fmt(s[c]) for c in TRACK_COLUMNS])
    write_csv(path, TRACK_COLUMNS, rows, provenance)


def track_feature(track: SwarmTrack):
    coords = [[o.longitude_deg, o.latitude_deg] for o in track.observations]
    geometry = {"type": "LineString", "coordinates": coords} if len(coords) >= 2 else {
        "type": "Point",
        "coordinates": coords[0],
    }
    props = {k: clean(v) for k, v in track_summary(track).items()}
    props.update(
        times_utc=[format_utc(o.time_utc) for o in track.observations],
        heights_km=[o.height_km for o in track.observations],
        gate_counts=[o.gate_count for o in track.observations],
        mean_dbz=[clean(o.mean_reflectivity_dbz) for o in track.observations],
    )
    return {"type": "Feature", "geometry": geometry, "properties": props}


def tracks_geojson(tracks, site=None, vcp=None, provenance=None):
    fc = {"type": "FeatureCollection", "features": [track_feature(t) for t in tracks]}
    if site is not None:
        fc["site"] = site_to_dict(site)
    if vcp is not None:
        fc["vcp"] = vcp_to_dict(vcp)
    if provenance is not None:
        fc["provenance"] = provenance
    return fc


def tracks_from_geojson(fc):
    """Rebuild tracks (and the radar site, if recorded) from :func:`tracks_geojson` output."""
    tracks = []
    for feat in fc.get("features", []):
        props = feat["properties"]
        geom = feat["geometry"]
        coords = geom["coordinates"] if geom["type"] == "LineString" else [geom["coordinates"]]
        obs = []
        for i, (lon, lat) in enumerate(coords):
            dbz = props.get("mean_dbz", [None] * len(coords))[i]
            obs.append(
                Observation(
                    time_utc=parse_utc(props["times_utc"][i]),
                    latitude_deg=float(lat),
                    longitude_deg=float(lon),
                    height_km=float(props["heights_km"][i]),
                    gate_count=int(props.get("gate_counts", [0] * len(coords))[i]),
                    mean_reflectivity_dbz=float("nan") if dbz is None else float(dbz),
                )
            )
        tracks.append(SwarmTrack(int(props["track_id"]), obs, TrackStatus(props["status"])))
    site = RadarSite(**fc["site"]) if "site" in fc else None
    return tracks, site
