"""Consolidate a run directory into one JSON report plus CSV tables."""

from __future__ import annotations

import glob
import hashlib
import json
import os

from . import __version__
from .errors import LocustRadarError
from .export import dumps, read_csv, write_csv
from .geometry import LUCKNOW_SITE, LUCKNOW_VCP, RadarSite, VcpDefinition, vcp_curves

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "provenance", "inputs", "clusters", "tracks", "crosschecks", "alerts", "vcp_curves"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": 1},
        "provenance": {
            "type": "object",
            "required": ["tool", "version"],
            "properties": {"tool": {"const": "locustradar"}, "version": {"type": "string"}},
        },
        "inputs": {
            "type": "object",
            "additionalProperties": {"type": ["object", "null"]},
        },
        "clusters": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["time_utc", "cluster_id", "gate_count", "mean_dbz", "centroid_lat_deg", "centroid_lon_deg"],
                "properties": {
                    "time_utc": {"type": "string", "pattern": "Z$"},
                    "cluster_id": {"type": "integer", "minimum": 0},
                    "gate_count": {"type": "integer", "minimum": 1},
                    "mean_dbz": {"type": "number"},
                    "centroid_lat_deg": {"type": "number", "minimum": -90, "maximum": 90},
                    "centroid_lon_deg": {"type": "number", "minimum": -180, "maximum": 180},
                },
            },
        },
        "tracks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["track_id", "status", "n_observations", "duration_s", "path_length_km", "net_displacement_km"],
                "properties": {
                    "track_id": {"type": "integer"},
                    "status": {"enum": ["ACTIVE", "ENDED"]},
                    "n_observations": {"type": "integer", "minimum": 1},
                    "duration_s": {"type": "number", "minimum": 0},
                    "path_length_km": {"type": "number", "minimum": 0},
                    "net_displacement_km": {"type": "number", "minimum": 0},
                    "mean_speed_ms": {"type": ["number", "null"]},
                    "net_speed_ms": {"type": ["number", "null"]},
                    "heading_deg": {"type": ["number", "null"], "minimum": 0, "exclusiveMaximum": 360},
                },
            },
        },
        "crosschecks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["track_id", "rain_verdict", "wind_verdict"],
                "properties": {
                    "rain_verdict": {"enum": ["NO_RAIN_CONFIRMED", "RAIN_PRESENT_AMBIGUOUS", "NO_STATIONS"]},
                    "wind_verdict": {"enum": ["DOWNWIND", "CROSSWIND", "UPWIND", "NO_WIND_DATA"]},
                    "wind_alignment_deg": {"type": ["number", "null"], "minimum": 0, "maximum": 180},
                },
            },
        },
        "alerts": {"type": "array", "items": {"type": "object", "required": ["track_id", "lead_time_h"]}},
        "vcp_curves": {
            "type": "array",
            "items": {"type": "array", "prefixItems": [{"type": "number"}] * 3, "minItems": 3, "maxItems": 3},
        },
    },
}

CLUSTER_INT = {"cluster_id", "gate_count"}
TRACK_INT = {"track_id", "n_observations"}


class NoArtifacts(LocustRadarError):
    pass


def _typed(row, ints):
    out = {}
    for k, v in row.items():
        if v == "":
            out[k] = None
        elif k in ints:
            out[k] = int(v)
        elif k.endswith("_utc") or k == "status":
            out[k] = v
        else:
            out[k] = float(v)
    return out


def _load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def build_report(run_dir):
    """Collect artifacts from ``run_dir``; raises :class:`NoArtifacts` when there are none."""
    inputs = {}
    clusters, tracks, crosschecks, alerts = [], [], [], []
    site, vcp = None, None

    # a track run writes one combined table; detect runs write one per volume
    combined = os.path.join(run_dir, "clusters.csv")
    if os.path.exists(combined):
        cluster_files = [combined]
    else:
        cluster_files = sorted(glob.glob(os.path.join(run_dir, "*.clusters.csv")))
    for path in cluster_files:
        prov, rows = read_csv(path)
        inputs[os.path.basename(path)] = prov
        clusters.extend(_typed(r, CLUSTER_INT) for r in rows)
    clusters.sort(key=lambda r: (r["time_utc"], r["cluster_id"]))

    tracks_csv = os.path.join(run_dir, "tracks.csv")
    if os.path.exists(tracks_csv):
        prov, rows = read_csv(tracks_csv)
        inputs["tracks.csv"] = prov
        tracks = [_typed(r, TRACK_INT) for r in rows]
    tracks_geo = os.path.join(run_dir, "tracks.geojson")
    if os.path.exists(tracks_geo):
        fc = _load_json(tracks_geo)
        inputs["tracks.geojson"] = fc.get("provenance")
        if "site" in fc:
            site = RadarSite(**fc["site"])
        if "vcp" in fc:
            v = dict(fc["vcp"])
            v["elevation_angles_deg"] = tuple(v["elevation_angles_deg"])
            vcp = VcpDefinition(**v)
    cc = os.path.join(run_dir, "crosscheck.json")
    if os.path.exists(cc):
        doc = _load_json(cc)
        inputs["crosscheck.json"] = doc.get("provenance")
        crosschecks = doc.get("reports", [])
    al = os.path.join(run_dir, "alerts.json")
    if os.path.exists(al):
        doc = _load_json(al)
        inputs["alerts.json"] = doc.get("provenance")
        alerts = doc.get("alerts", [])

    if not inputs:
        raise NoArtifacts(f"no artifacts found in {run_dir}")

    site = site or LUCKNOW_SITE
    vcp = vcp or LUCKNOW_VCP
    curves = [list(r) for r in vcp_curves(site, vcp)]
    return {
        "schema_version": 1,
        "provenance": {"tool": "locustradar", "version": __version__},
        "inputs": inputs,
        "clusters": clusters,
        "tracks": tracks,
        "crosschecks": crosschecks,
        "alerts": alerts,
        "vcp_curves": curves,
    }


def write_report(run_dir, out_dir=None):
    """Write ``report.json`` and CSV tables; returns the SHA-256 of ``report.json``."""
    report = build_report(run_dir)
    out_dir = out_dir or os.path.join(run_dir, "report")
    os.makedirs(out_dir, exist_ok=True)
    text = dumps(report)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    prov = report["provenance"]
    if report["clusters"]:
        cols = list(report["clusters"][0])
        write_csv(os.path.join(out_dir, "clusters.csv"), cols, ([r[c] for c in cols] for r in report["clusters"]), prov)
    if report["tracks"]:
        cols = list(report["tracks"][0])
        write_csv(os.path.join(out_dir, "tracks.csv"), cols, ([r[c] for c in cols] for r in report["tracks"]), prov)
    if report["crosschecks"]:
        cols = ["track_id", "rain_verdict", "wind_verdict", "wind_alignment_deg"]
        write_csv(
            os.path.join(out_dir, "crosschecks.csv"),
            cols,
            ([r.get(c) for c in cols] for r in report["crosschecks"]),
            prov,
        )
    write_csv(
        os.path.join(out_dir, "vcp_curves.csv"),
        ["elevation_deg", "range_km", "height_km"],
        (map(repr, r) for r in report["vcp_curves"]),
        prov,
    )
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    with open(os.path.join(out_dir, "report.sha256"), "w", encoding="utf-8") as fh:
        fh.write(f"{digest}  report.json\n")
    return digest
