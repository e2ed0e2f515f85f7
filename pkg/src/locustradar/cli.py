"""``locustradar`` command line: simulate, detect, track, crosscheck, report.

Exit codes: 0 success (including zero detections), 1 internal error,
2 bad input or configuration.
"""

from __future__ import annotations

import functools
import json
import os
import sys

import click

from . import __version__
from .ancillary import read_rain_records, read_wind_field
from .config import RunConfig, load_config
from .crosscheck import crosscheck_track
from .errors import LocustRadarError, OutOfCoverage
from .echo_filter import extract_clusters
from .export import (
    clusters_geojson,
    tracks_from_geojson,
    tracks_geojson,
    write_clusters_csv,
    write_json,
    write_tracks_csv,
)
from .geometry import LUCKNOW_SITE
from .report import write_report
from .simulator import PRESETS, scene_from_dict, scene_to_dict, write_scene
from .svol import list_volumes, read_volume
from .tracker import NOT_APPROACHING, SwarmTracker, TrackStatus, lead_time_estimate
from .volume import format_utc

EXIT_OK, EXIT_INTERNAL, EXIT_BAD_INPUT = 0, 1, 2


def _guard(fn):
    """Map library errors to the exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except click.ClickException:
            raise
        except (LocustRadarError, OSError, json.JSONDecodeError) as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_BAD_INPUT)
        except Exception as exc:  # noqa: BLE001 - last-resort contract
            click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_INTERNAL)

    return wrapper


def _threshold_options(fn):
    fn = click.option("--min-cluster-gates", type=int, default=None, help="Smallest cluster kept.")(fn)
    fn = click.option("--height-ceiling-km", type=float, default=None, help="Beam-height ceiling.")(fn)
    fn = click.option("--v-max-ms", type=float, default=None, help="Largest |radial velocity| kept.")(fn)
    fn = click.option("--z-min-dbz", type=float, default=None, help="Reflectivity floor.")(fn)
    fn = click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                      help="TOML run configuration.")(fn)
    return fn


def _run_config(config_path, z_min_dbz, v_max_ms, height_ceiling_km, min_cluster_gates) -> RunConfig:
    return load_config(
        config_path,
        {
            "filter.z_min_dbz": z_min_dbz,
            "filter.v_max_abs_ms": v_max_ms,
            "filter.height_ceiling_km": height_ceiling_km,
            "filter.min_cluster_gates": min_cluster_gates,
        },
    )


@click.group()
@click.version_option(__version__, prog_name="locustradar")
def main():
    """Detect and track low-flying swarm echoes in weather-radar volumes."""


@main.command()
@click.argument("scene", required=False, type=click.Path(dir_okay=False))
@click.option("--preset", type=click.Choice(sorted(PRESETS)), default=None, help="Bundled scene.")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--n-volumes", type=int, default=None, help="Override the volume count.")
@click.option("--seed", type=int, default=None, help="Override the RNG seed.")
@_guard
def simulate(scene, preset, out_dir, n_volumes, seed):
    """Write a synthetic scene (SVOL files plus truth.json) to OUT_DIR."""
    if (scene is None) == (preset is None):
        raise click.UsageError("give exactly one of SCENE or --preset")
    if preset is not None:
        spec_dict = scene_to_dict(PRESETS[preset]())
    else:
        with open(scene, encoding="utf-8") as fh:
            spec_dict = json.load(fh)
        spec_dict = spec_dict.get("scene", spec_dict)
    if n_volumes is not None:
        spec_dict["n_volumes"] = n_volumes
    if seed is not None:
        spec_dict["rng_seed"] = seed
    spec = scene_from_dict(spec_dict)
    prov = {"tool": "locustradar", "version": __version__, "preset": preset}
    paths = write_scene(spec, out_dir, provenance=prov)
    click.echo(f"wrote {len(paths)} volume(s) to {out_dir}")


@main.command()
@click.argument("volumes", nargs=-1, required=True, type=click.Path(dir_okay=False))
@_threshold_options
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@_guard
def detect(volumes, config_path, z_min_dbz, v_max_ms, height_ceiling_km, min_cluster_gates, out_dir):
    """Filter and cluster the lowest sweep of each volume."""
    cfg = _run_config(config_path, z_min_dbz, v_max_ms, height_ceiling_km, min_cluster_gates)
    prov = cfg.provenance()
    os.makedirs(out_dir, exist_ok=True)
    for path in volumes:
        vol = read_volume(path)
        clusters = extract_clusters(vol, cfg.filter)
        stem = os.path.splitext(os.path.basename(path))[0]
        write_clusters_csv(clusters, os.path.join(out_dir, f"{stem}.clusters.csv"), prov)
        write_json(clusters_geojson(clusters, prov), os.path.join(out_dir, f"{stem}.clusters.geojson"))
        click.echo(f"{stem}: {len(clusters)} cluster(s)")


@main.command()
@click.argument("volume_dir", type=click.Path(exists=True, file_okay=False))
@_threshold_options
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@_guard
def track(volume_dir, config_path, z_min_dbz, v_max_ms, height_ceiling_km, min_cluster_gates, out_dir):
    """Detect and associate clusters across every volume in VOLUME_DIR."""
    cfg = _run_config(config_path, z_min_dbz, v_max_ms, height_ceiling_km, min_cluster_gates)
    prov = cfg.provenance()
    paths = list_volumes(volume_dir)
    if not paths:
        raise LocustRadarError(f"no SVOL files in {volume_dir}")
    tracker = SwarmTracker(cfg.tracker)
    all_clusters = []
    site = vcp = None
    for path in paths:
        vol = read_volume(path)
        site, vcp = site or vol.site, vcp or vol.vcp
        clusters = extract_clusters(vol, cfg.filter)
        all_clusters.extend(clusters)
        tracker.update(vol.start_time_utc, clusters)

    swarms = tracker.swarm_tracks()
    swarm_ids = {t.track_id for t in swarms}
    candidates = [t for t in tracker.tracks if t.track_id not in swarm_ids]
    os.makedirs(out_dir, exist_ok=True)
    write_json(tracks_geojson(swarms, site, vcp, prov), os.path.join(out_dir, "tracks.geojson"))
    write_json(tracks_geojson(candidates, site, vcp, prov), os.path.join(out_dir, "candidates.geojson"))
    write_tracks_csv(swarms, os.path.join(out_dir, "tracks.csv"), prov)
    write_clusters_csv(all_clusters, os.path.join(out_dir, "clusters.csv"), prov)

    alerts = []
    for t in swarms:
        if t.status is not TrackStatus.ACTIVE:
            continue
        try:
            hours = lead_time_estimate(t, site, cfg.alerts.range_limit_km)
        except OutOfCoverage:
            continue
        if hours != NOT_APPROACHING and hours < cfg.alerts.lead_time_threshold_h:
            last = t.observations[-1]
            alerts.append(
                {
                    "track_id": t.track_id,
                    "lead_time_h": hours,
                    "issued_for_utc": format_utc(last.time_utc),
                    "latitude_deg": last.latitude_deg,
                    "longitude_deg": last.longitude_deg,
                }
            )
    write_json({"provenance": prov, "alerts": alerts}, os.path.join(out_dir, "alerts.json"))
    click.echo(f"{len(paths)} volume(s), {len(swarms)} track(s), {len(candidates)} candidate(s), {len(alerts)} alert(s)")


@main.command()
@click.argument("tracks_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--rain", "rain_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Rain-gauge CSV.")
@click.option("--wind", "wind_paths", multiple=True, type=click.Path(exists=True, dir_okay=False),
              help="Gridded wind CSV; repeat for several valid times.")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@_guard
def crosscheck(tracks_path, rain_path, wind_paths, config_path, out_dir):
    """Corroborate tracks with rain gauges and wind fields."""
    cfg = load_config(config_path)
    with open(tracks_path, encoding="utf-8") as fh:
        tracks, site = tracks_from_geojson(json.load(fh))
    site = site or LUCKNOW_SITE
    records = read_rain_records(rain_path) if rain_path else []
    winds = [read_wind_field(p) for p in wind_paths]
    reports = [crosscheck_track(t, records, winds, site, cfg.crosscheck).to_dict() for t in tracks]
    os.makedirs(out_dir, exist_ok=True)
    write_json({"provenance": cfg.provenance(), "reports": reports}, os.path.join(out_dir, "crosscheck.json"))
    for r in reports:
        click.echo(f"track {r['track_id']}: {r['rain_verdict']}, {r['wind_verdict']}")


@main.command()
@click.argument("run_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--out-dir", type=click.Path(file_okay=False), default=None,
              help="Defaults to RUN_DIR/report.")
@_guard
def report(run_dir, out_dir):
    """Bundle a run directory into report.json plus CSV tables."""
    digest = write_report(run_dir, out_dir)
    click.echo(digest)


if __name__ == "__main__":
    main()
