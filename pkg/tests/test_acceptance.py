"""
Acceptance gate: one test per criterion, each at its stated tolerance and
runtime budget. Every test records a PASS/FAIL line that is printed at the
end of the session (and immediately when run with ``-s``).
"""

import hashlib
import math
import time
from datetime import timedelta

import numpy as np

import conftest
from conftest import SITE, SMALL_VCP, T0, random_sweep, random_volume
from oracles import as_partition, flood_fill_components, predicate_mask, small_angle_height
from locustradar.crosscheck import RainVerdict, wind_alignment
from locustradar.echo_filter import Connectivity, FilterConfig, apply_gate_filters, extract_clusters, gate_heights_km, label_clusters
from locustradar.geometry import LUCKNOW_SITE, LUCKNOW_VCP, RadarSite, beam_height, destination_point, max_analysis_range
from locustradar.products import vertical_slice
from locustradar.simulator import (
    SceneSimulator,
    SceneSpec,
    StormSpec,
    SwarmSpec,
    lucknow_20200712,
    score_detection,
    uniform_wind_field,
)
from locustradar.svol import decode_volume, encode_volume
from locustradar.tracker import Observation, SwarmTrack, SwarmTracker, lead_time_estimate
from locustradar.ancillary import RainRecord
from locustradar.crosscheck import rain_crosscheck


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    conftest.ACCEPTANCE_LINES[n] = line
    print(line)
    return ok


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_criterion_1_geometry():
    with Timer() as t:
        h = beam_height(150.0, 0.2, 0.0)
        r = max_analysis_range(0.2, 0.0, 2.0)
        oracle = small_angle_height(150.0, 0.2)
    ok = 1.83 <= h <= 1.87 and 150.0 <= r <= 160.0 and abs(h - oracle) / oracle < 5e-3 and t.elapsed < 1.0
    record(1, ok, f"h(150 km, 0.2 deg)={h:.4f} km, small-angle {oracle:.4f} km, range limit {r:.2f} km, {t.elapsed:.3f} s")
    assert ok


def _random_cfg(rng):
    spectrum = bool(rng.random() < 0.3)
    return FilterConfig(
        z_min_dbz=float(np.round(rng.uniform(0, 30), 2)),
        v_max_abs_ms=float(np.round(rng.uniform(0.5, 12), 2)),
        height_ceiling_km=float(rng.uniform(0.5, 4.0)),
        use_spectrum_width=spectrum,
        w_max_ms=float(rng.uniform(0.5, 6)) if spectrum else None,
        reject_missing_velocity=bool(rng.random() < 0.7),
    )


def test_criterion_2_filter_correctness():
    rng = np.random.default_rng(2)
    with Timer() as t:
        mismatches = 0
        for i in range(200):
            el = SMALL_VCP.elevation_angles_deg[i % 3]
            sw = random_sweep(rng, elevation=el)
            cfg = FilterConfig() if i < 20 else _random_cfg(rng)
            mismatches += int(np.sum(apply_gate_filters(sw, SITE, SMALL_VCP, cfg) != predicate_mask(sw, SITE, SMALL_VCP, cfg)))
        violations = 0
        for _ in range(50):
            sw = random_sweep(rng, elevation=float(rng.choice(SMALL_VCP.elevation_angles_deg)))
            loose = _random_cfg(rng)
            tight = FilterConfig(
                z_min_dbz=loose.z_min_dbz + float(rng.uniform(0, 10)),
                v_max_abs_ms=max(loose.v_max_abs_ms - float(rng.uniform(0, 5)), 0.01),
                height_ceiling_km=max(loose.height_ceiling_km - float(rng.uniform(0, 1)), 0.2),
                use_spectrum_width=loose.use_spectrum_width,
                w_max_ms=None if loose.w_max_ms is None else loose.w_max_ms - float(rng.uniform(0, 0.4)),
                reject_missing_velocity=loose.reject_missing_velocity,
            )
            a = apply_gate_filters(sw, SITE, SMALL_VCP, loose)
            b = apply_gate_filters(sw, SITE, SMALL_VCP, tight)
            violations += int(np.sum(b & ~a))
    ok = mismatches == 0 and violations == 0 and t.elapsed < 30.0
    record(2, ok, f"{mismatches} mask mismatches over 200 sweeps, {violations} monotonicity violations over 50 triples, {t.elapsed:.2f} s")
    assert ok


def _seam_mask(rng):
    mask = rng.random((20, 30)) < 0.25
    g = int(rng.integers(0, 30))
    mask[0, g] = mask[19, g] = True
    mask[1, g] = mask[18, g] = True
    return mask


def test_criterion_3_clustering():
    rng = np.random.default_rng(3)
    with Timer() as t:
        wrong, seam_masks = 0, 0
        for i in range(100):
            mask = _seam_mask(rng) if i % 5 == 0 else rng.random((20, 30)) < rng.uniform(0.2, 0.6)
            eight = i % 2 == 1
            conn = Connectivity.EIGHT if eight else Connectivity.FOUR
            expected = set(flood_fill_components(mask, eight))
            if as_partition(label_clusters(mask, conn)) != expected:
                wrong += 1
            # a seam component is one the circular oracle keeps whole but an open lattice splits
            open_parts = set(flood_fill_components(mask, eight, circular=False))
            if any(c not in open_parts and any(r == 0 for r, _ in c) and any(r == 19 for r, _ in c) for c in expected):
                seam_masks += 1
    ok = wrong == 0 and seam_masks >= 10 and t.elapsed < 10.0
    record(3, ok, f"{wrong}/100 masks differ from flood fill, {seam_masks} with seam-spanning components, {t.elapsed:.2f} s")
    assert ok


def test_criterion_4_lucknow_swarm_scenario():
    with Timer() as t:
        spec = lucknow_20200712()
        tracker = SwarmTracker()
        for vol, _ in SceneSimulator(spec):
            tracker.update(vol.start_time_utc, extract_clusters(vol, FilterConfig()))
        tracks = tracker.swarm_tracks()
    n_tracks = len(tracks)
    ok = n_tracks == 1 and t.elapsed < 120.0
    if n_tracks == 1:
        trk = tracks[0]
        k = trk.kinematics()
        gates = float(np.mean([o.gate_count for o in trk.observations]))
        dbz = float(np.mean([o.mean_reflectivity_dbz for o in trk.observations]))
        net_oracle = 3.47 * 32399 / 1000.0
        ok &= abs(gates - 2880) <= 0.02 * 2880
        ok &= abs(dbz - 27.11) <= 0.3
        ok &= abs(k.mean_speed_ms - 3.47) <= 0.05 * 3.47
        ok &= abs(k.net_displacement_km - net_oracle) <= 0.02 * net_oracle
        detail = (
            f"1 track of {len(trk.observations)} obs, mean gates {gates:.1f}, mean {dbz:.3f} dBZ, "
            f"speed {k.mean_speed_ms:.3f} m/s, net {k.net_displacement_km:.2f} km vs {net_oracle:.2f} km, {t.elapsed:.1f} s"
        )
    else:
        detail = f"{n_tracks} tracks, {t.elapsed:.1f} s"
    record(4, ok, detail)
    assert ok


def _point(bearing, km):
    la, lo = destination_point(LUCKNOW_SITE.latitude_deg, LUCKNOW_SITE.longitude_deg, bearing, km)
    return round(float(la), 6), round(float(lo), 6)


def test_criterion_5_confounders():
    with Timer() as t:
        slat, slon = _point(90, 60)
        wlat, wlon = _point(270, 60)
        spec = SceneSpec(
            site=LUCKNOW_SITE,
            vcp=LUCKNOW_VCP,
            start_time_utc=T0,
            n_volumes=3,
            swarms=(SwarmSpec(wlat, wlon, layer_base_km=0.0, layer_depth_m=1950, heading_deg=95.0, target_gate_count=2880),),
            storms=(StormSpec(slat, slon, top_km=4.5, core_dbz=45.0, radius_km=10.0, speed_ms=3.5, heading_deg=45.0),),
            rng_seed=55,
        )
        cfg = FilterConfig()
        high_storm_kept = storm_clusters = 0
        recalls = []
        tracker = SwarmTracker()
        for vol, truth in SceneSimulator(spec):
            storm = truth.by_kind("storm")[0]
            for s, sw in enumerate(vol.sweeps):
                kept = apply_gate_filters(sw, LUCKNOW_SITE, LUCKNOW_VCP, cfg).ravel()
                g = storm.gates_on(s)
                h = gate_heights_km(LUCKNOW_SITE, LUCKNOW_VCP, sw.elevation_deg)[g % LUCKNOW_VCP.gates_per_ray]
                high_storm_kept += int(np.sum(kept[g[h > 2.0]]))
            clusters = extract_clusters(vol, cfg)
            storm_set = set(storm.gates_on(0).tolist())
            storm_clusters += sum(
                1 for c in clusters if storm_set & set(c.flat_indices(LUCKNOW_VCP.gates_per_ray).tolist())
            )
            recalls.append(score_detection(truth, clusters)["swarm"].recall)
            swarm_set = set(truth.by_kind("swarm")[0].gates_on(0).tolist())
            tracker.update(vol.start_time_utc, [
                c for c in clusters if swarm_set & set(c.flat_indices(LUCKNOW_VCP.gates_per_ray).tolist())
            ])
        (trk,) = tracker.tracks
        day = T0.replace(hour=0, minute=0, second=0)
        dry = [RainRecord("Lucknow", 26.85, 80.95, day, day + timedelta(hours=12), 0.0)]
        wet = [RainRecord("Lucknow", 26.85, 80.95, day, day + timedelta(hours=12), 3.2)]
        dry_v = rain_crosscheck(trk, dry, LUCKNOW_SITE).verdict
        wet_v = rain_crosscheck(trk, wet, LUCKNOW_SITE).verdict
    recall = min(recalls)
    ok = (
        high_storm_kept == 0
        and storm_clusters >= 1
        and dry_v is RainVerdict.NO_RAIN_CONFIRMED
        and wet_v is RainVerdict.RAIN_PRESENT_AMBIGUOUS
        and recall >= 0.95
        and t.elapsed < 60.0
    )
    record(
        5,
        ok,
        f"{high_storm_kept} storm gates above 2 km kept, {storm_clusters} low-level storm clusters, "
        f"rain {dry_v.value}/{wet_v.value}, min swarm recall {recall:.3f}, {t.elapsed:.1f} s",
    )
    assert ok


def test_criterion_6_vertical_structure():
    with Timer() as t:
        sim = SceneSimulator(lucknow_20200712())
        tops = []
        for i in range(0, len(sim), 9):
            vol, truth = sim.volume(i)
            lat = truth.by_kind("swarm")[0].center_lat_deg
            sl = vertical_slice(vol, lat, min_dbz=15.0)
            heights = sl.populated_heights_km()
            tops.append(float(heights.max()) if heights.size else math.nan)
    top = max(tops)
    # lower bin edges; one 0.1 km bin of tolerance above the ceiling
    ok = not any(math.isnan(x) for x in tops) and top < 2.0 + 0.1 and t.elapsed < 30.0
    record(6, ok, f"highest populated bin starts at {top:.2f} km over {len(tops)} volumes, {t.elapsed:.1f} s")
    assert ok


def _track_with_heading(heading, lat=0.0, lon=30.0):
    la, lo = destination_point(lat, lon, heading, 20.0)
    return SwarmTrack(1, [Observation(T0, lat, lon, 1.0), Observation(T0 + timedelta(hours=1), float(la), float(lo), 1.0)])


def test_criterion_7_wind_and_lead_time():
    rng = np.random.default_rng(7)
    site = RadarSite("EQ", 0.0, 30.0, 0.0, "S")
    with Timer() as t:
        aligned = wind_alignment(_track_with_heading(90.0), uniform_wind_field(site, 5.0, 0.0, T0)).alignment_deg
        antipodal = wind_alignment(_track_with_heading(90.0), uniform_wind_field(site, -5.0, 0.0, T0)).alignment_deg
        worst = 0.0
        for _ in range(100):
            trk = _track_with_heading(float(rng.uniform(0, 360)))
            ang = rng.uniform(0, 2 * math.pi)
            mag = rng.uniform(0.5, 15)
            u, v = mag * math.sin(ang), mag * math.cos(ang)
            scale = float(rng.uniform(0.01, 100))
            a = wind_alignment(trk, uniform_wind_field(site, u, v, T0)).alignment_deg
            b = wind_alignment(trk, uniform_wind_field(site, u * scale, v * scale, T0)).alignment_deg
            worst = max(worst, abs(a - b))
        la0, lo0 = destination_point(LUCKNOW_SITE.latitude_deg, LUCKNOW_SITE.longitude_deg, 270.0, 114.3)
        la1, lo1 = destination_point(LUCKNOW_SITE.latitude_deg, LUCKNOW_SITE.longitude_deg, 270.0, 100.0)
        trk = SwarmTrack(0, [Observation(T0, float(la0), float(lo0), 1.0),
                             Observation(T0 + timedelta(hours=1), float(la1), float(lo1), 1.0)])
        lead = lead_time_estimate(trk, LUCKNOW_SITE)
    ok = (
        abs(aligned) <= 1e-9
        and abs(antipodal - 180.0) <= 1e-9
        and worst <= 1e-9
        and abs(lead - 7.0) <= 0.05
        and t.elapsed < 10.0
    )
    record(7, ok, f"aligned {aligned:.2e} deg, antipodal {antipodal:.6f} deg, max scaling drift {worst:.1e} deg, "
                  f"lead time {lead:.3f} h, {t.elapsed:.2f} s")
    assert ok


def _bits(vol):
    return [tuple(sw.moment(m).tobytes() for m in "ZVW") + (sw.ray_azimuths_deg.tobytes(),) for sw in vol.sweeps]


def test_criterion_8_io_round_trip():
    rng = np.random.default_rng(8)
    with Timer() as t:
        failures = 0
        nondeterministic = 0
        for _ in range(1000):
            v = random_volume(rng)
            data = encode_volume(v)
            back = decode_volume(data)
            if not (back == v and _bits(back) == _bits(v)):
                failures += 1
            if hashlib.sha256(encode_volume(v)).digest() != hashlib.sha256(data).digest():
                nondeterministic += 1
            if hashlib.sha256(encode_volume(back)).digest() != hashlib.sha256(data).digest():
                nondeterministic += 1
    ok = failures == 0 and nondeterministic == 0 and t.elapsed < 60.0
    record(8, ok, f"{failures} round-trip failures and {nondeterministic} hash mismatches over 1000 volumes, {t.elapsed:.2f} s")
    assert ok
