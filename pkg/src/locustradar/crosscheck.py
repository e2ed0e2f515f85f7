"""Corroborate swarm tracks with rain-gauge records and gridded winds."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

from .ancillary import WindField, direction_of_travel_deg
from .geometry import RadarSite, haversine_km
from .tracker import SwarmTrack, track_kinematics


class RainVerdict(str, enum.Enum):
    NO_RAIN_CONFIRMED = "NO_RAIN_CONFIRMED"
    RAIN_PRESENT_AMBIGUOUS = "RAIN_PRESENT_AMBIGUOUS"
    NO_STATIONS = "NO_STATIONS"


class WindVerdict(str, enum.Enum):
    DOWNWIND = "DOWNWIND"
    CROSSWIND = "CROSSWIND"
    UPWIND = "UPWIND"
    NO_WIND_DATA = "NO_WIND_DATA"


@dataclass(frozen=True)
class StationCheck:
    station_id: str
    distance_km: float
    rainfall_mm: float


@dataclass(frozen=True)
class RainCheck:
    verdict: RainVerdict
    stations: tuple = ()


@dataclass(frozen=True)
class WindCheck:
    verdict: WindVerdict
    alignment_deg: float | None = None
    wind_bearing_deg: float | None = None
    track_heading_deg: float | None = None


@dataclass(frozen=True)
class CrossCheckReport:
    track_id: int
    rain_verdict: RainVerdict
    stations_checked: tuple
    wind_alignment_deg: float | None
    wind_verdict: WindVerdict
    wind_bearing_deg: float | None = None
    track_heading_deg: float | None = None

    def to_dict(self):
        d = asdict(self)
        d["rain_verdict"] = self.rain_verdict.value
        d["wind_verdict"] = self.wind_verdict.value
        d["stations_checked"] = [asdict(s) for s in self.stations_checked]
        return d


@dataclass(frozen=True)
class CrossCheckConfig:
    rain_radius_km: float = 150.0
    downwind_max_deg: float = 45.0
    upwind_min_deg: float = 135.0
    _eps: float = field(default=1e-9, repr=False)


def rain_crosscheck(track: SwarmTrack, records, site: RadarSite, radius_km: float = 150.0) -> RainCheck:
    """
    Check rain gauges near the radar over the track's lifetime.

    Stations are selected by distance to the radar site (not to the swarm)
    and by overlap of their accumulation window with the track's first-to-last
    observation window.
    """
    if not track.observations:
        raise ValueError("track has no observations")
    t0, t1 = track.first.time_utc, track.last.time_utc
    selected = []
    for rec in records:
        d = haversine_km(site.latitude_deg, site.longitude_deg, rec.latitude_deg, rec.longitude_deg)
        if d > radius_km:
            continue
        if rec.window_start_utc > t1 or rec.window_end_utc < t0:
            continue
        selected.append(StationCheck(rec.station_id, d, rec.rainfall_mm))
    if not selected:
        return RainCheck(RainVerdict.NO_STATIONS)
    if any(s.rainfall_mm > 0 for s in selected):
        return RainCheck(RainVerdict.RAIN_PRESENT_AMBIGUOUS, tuple(selected))
    return RainCheck(RainVerdict.NO_RAIN_CONFIRMED, tuple(selected))


def angular_difference_deg(a, b) -> float:
    d = abs(a - b) % 360.0
    return min(d, 360.0 - d)


def classify_alignment(alignment_deg, cfg: CrossCheckConfig = CrossCheckConfig()) -> WindVerdict:
    if alignment_deg <= cfg.downwind_max_deg + cfg._eps:
        return WindVerdict.DOWNWIND
    if alignment_deg >= cfg.upwind_min_deg - cfg._eps:
        return WindVerdict.UPWIND
    return WindVerdict.CROSSWIND


def _nearest_field(fields, when):
    return min(fields, key=lambda f: (abs((f.valid_time_utc - when).total_seconds()), f.valid_time_utc))


def wind_alignment(track: SwarmTrack, wind, cfg: CrossCheckConfig = CrossCheckConfig()) -> WindCheck:
    """
    Compare the track heading with the mean wind direction of travel.

    ``wind`` is a :class:`WindField` or a sequence of them; each observation
    uses the field closest in time, sampled bilinearly at its centroid.
    """
    heading = track_kinematics(track).mean_heading_deg
    fields = [wind] if isinstance(wind, WindField) else list(wind)
    if not fields:
        return WindCheck(WindVerdict.NO_WIND_DATA, track_heading_deg=heading)
    us, vs = [], []
    for obs in track.observations:
        sample = _nearest_field(fields, obs.time_utc).sample(obs.latitude_deg, obs.longitude_deg)
        if sample is None:
            return WindCheck(WindVerdict.NO_WIND_DATA, track_heading_deg=heading)
        us.append(sample[0])
        vs.append(sample[1])
    u = math.fsum(us) / len(us)
    v = math.fsum(vs) / len(vs)
    if u == 0.0 and v == 0.0:
        return WindCheck(WindVerdict.NO_WIND_DATA, track_heading_deg=heading)
    bearing = direction_of_travel_deg(u, v)
    alignment = angular_difference_deg(heading, bearing)
    return WindCheck(classify_alignment(alignment, cfg), alignment, bearing, heading)


def crosscheck_track(track, records, wind, site, cfg: CrossCheckConfig = CrossCheckConfig()) -> CrossCheckReport:
    rain = rain_crosscheck(track, records, site, cfg.rain_radius_km)
    if len(track.observations) >= 2:
        w = wind_alignment(track, wind, cfg)
    else:
        w = WindCheck(WindVerdict.NO_WIND_DATA)
    return CrossCheckReport(
        track_id=track.track_id,
        rain_verdict=rain.verdict,
        stations_checked=rain.stations,
        wind_alignment_deg=w.alignment_deg,
        wind_verdict=w.verdict,
        wind_bearing_deg=w.wind_bearing_deg,
        track_heading_deg=w.track_heading_deg,
    )
