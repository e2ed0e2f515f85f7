import math
from datetime import datetime, timezone

import numpy as np
import pytest

from locustradar.echo_filter import EchoCluster
from locustradar.geometry import RadarSite, VcpDefinition
from locustradar.svol import quantize
from locustradar.volume import Sweep, VolumeScan

T0 = datetime(2020, 7, 12, 2, 32, 10, tzinfo=timezone.utc)

# coarse layout so per-gate oracles stay cheap; 2.5 km gates reach past the
# 2 km ceiling on the lowest sweep
SMALL_VCP = VcpDefinition(
    elevation_angles_deg=(0.2, 1.0, 2.0),
    first_gate_range_m=125.0,
    gate_spacing_m=2500.0,
    gates_per_ray=80,
    rays_per_sweep=36,
)
SITE = RadarSite("TST", 26.85, 80.95, 128.0, "S")


def random_moments(rng, shape, nan_frac=0.1):
    z = quantize(rng.uniform(-10.0, 40.0, shape))
    v = quantize(rng.uniform(-12.0, 12.0, shape))
    w = quantize(rng.uniform(0.0, 8.0, shape))
    for grid in (z, v, w):
        grid[rng.random(shape) < nan_frac] = np.nan
    return z, v, w


def random_sweep(rng, vcp=SMALL_VCP, elevation=None):
    el = vcp.elevation_angles_deg[0] if elevation is None else elevation
    z, v, w = random_moments(rng, (vcp.rays_per_sweep, vcp.gates_per_ray))
    return Sweep(el, vcp.default_azimuths_deg(), z, v, w)


def make_cluster(lat, lon, t=T0, gates=10, dbz=27.0, height=1.0):
    rays = np.zeros(gates, dtype=np.int64)
    cols = np.arange(gates, dtype=np.int64)
    return EchoCluster(
        cluster_id=0,
        elevation_deg=0.2,
        rays=rays,
        gates=cols,
        mean_reflectivity_dbz=dbz,
        mean_reflectivity_linear_dbz=dbz,
        mean_radial_velocity_ms=0.0,
        centroid_lat_deg=lat,
        centroid_lon_deg=lon,
        centroid_height_km=height,
        start_time_utc=t,
    )


def volume_of(sweeps, vcp=SMALL_VCP, site=SITE, t=T0):
    return VolumeScan(site, vcp, t, tuple(sweeps))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def km_to_deg_lat(km):
    return km / (math.pi * 6371.0 / 180.0)


def random_volume(rng):
    """A small valid VolumeScan with arbitrary site, layout and moments."""
    from datetime import timedelta

    n_el = int(rng.integers(1, 5))
    elevs = tuple(np.round(np.sort(rng.choice(np.arange(1, 400), n_el, replace=False)) * 0.1, 1))
    vcp = VcpDefinition(
        elevation_angles_deg=elevs,
        cadence_s=float(rng.uniform(60, 900)),
        first_gate_range_m=float(rng.uniform(0, 500)),
        gate_spacing_m=float(rng.uniform(50, 1000)),
        gates_per_ray=int(rng.integers(1, 12)),
        rays_per_sweep=int(rng.integers(1, 10)),
    )
    site = RadarSite(
        "".join(rng.choice(list("ABCDEFGHJKLMNPQRSTUVWXYZ0123456789"), int(rng.integers(1, 7)))),
        float(rng.uniform(-89, 89)),
        float(rng.uniform(-179, 179)),
        float(rng.uniform(0, 3000)),
        str(rng.choice(["S", "C", "X"])),
    )
    used = sorted(rng.choice(len(elevs), int(rng.integers(0, len(elevs) + 1)), replace=False))
    shape = (vcp.rays_per_sweep, vcp.gates_per_ray)
    sweeps = []
    for i in used:
        az = np.sort(rng.choice(36000, vcp.rays_per_sweep, replace=False)) / 100.0
        z = quantize(rng.uniform(-35, 80, shape))
        v = quantize(rng.uniform(-60, 60, shape))
        w = quantize(rng.uniform(0, 20, shape))
        for g in (z, v, w):
            g[rng.random(shape) < 0.2] = np.nan
        sweeps.append(Sweep(elevs[i], az, z, v, w))
    t = T0 + timedelta(seconds=int(rng.integers(-10**8, 10**8)), microseconds=int(rng.integers(0, 2)) * int(rng.integers(0, 10**6)))
    return VolumeScan(site, vcp, t, tuple(sweeps))


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
