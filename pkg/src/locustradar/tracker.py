"""Greedy nearest-neighbour association of echo clusters into swarm tracks."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from datetime import datetime

import numpy as np

from .errors import InsufficientObservations, NonMonotonicTime, OutOfCoverage, ValidationError
from .geometry import RadarSite, haversine_km, initial_bearing_deg

NOT_APPROACHING = math.inf


class TrackStatus(str, enum.Enum):
    ACTIVE = "ACTIVE"
    ENDED = "ENDED"


@dataclass(frozen=True)
class TrackerConfig:
    max_association_speed_ms: float = 10.0
    max_missed_scans: int = 2
    min_track_observations: int = 3

    def __post_init__(self):
        if not (self.max_association_speed_ms > 0 and self.max_missed_scans > 0 and self.min_track_observations > 0):
            raise ValidationError("tracker settings must all be positive")


@dataclass(frozen=True)
class Observation:
    time_utc: datetime
    latitude_deg: float
    longitude_deg: float
    height_km: float
    gate_count: int = 0
    mean_reflectivity_dbz: float = float("nan")
    cluster: object = None

    @classmethod
    def from_cluster(cls, cluster):
        return cls(
            time_utc=cluster.start_time_utc,
            latitude_deg=cluster.centroid_lat_deg,
            longitude_deg=cluster.centroid_lon_deg,
            height_km=cluster.centroid_height_km,
            gate_count=cluster.gate_count,
            mean_reflectivity_dbz=cluster.mean_reflectivity_dbz,
            cluster=cluster,
        )


@dataclass(frozen=True)
class Kinematics:
    path_length_km: float
    net_displacement_km: float
    duration_s: float
    mean_speed_ms: float
    net_speed_ms: float
    mean_heading_deg: float


@dataclass
class SwarmTrack:
    track_id: int
    observations: list = field(default_factory=list)
    status: TrackStatus = TrackStatus.ACTIVE
    missed_scans: int = 0

    @property
    def last(self) -> Observation:
        return self.observations[-1]

    @property
    def first(self) -> Observation:
        return self.observations[0]

    def append(self, obs: Observation):
        if self.observations and obs.time_utc <= self.last.time_utc:
            raise NonMonotonicTime(
                f"track {self.track_id}: observation at {obs.time_utc} does not follow {self.last.time_utc}"
            )
        self.observations.append(obs)

    def kinematics(self) -> Kinematics:
        return track_kinematics(self)


def track_kinematics(track: SwarmTrack) -> Kinematics:
    """
    Path length, net displacement, duration, speeds and heading of a track.

    Distances are great-circle (haversine, 6371 km sphere). The heading is
    the initial bearing from the first to the last centroid.
    """
    obs = track.observations
    if len(obs) < 2:
        raise InsufficientObservations(f"track {track.track_id} has {len(obs)} observation(s)")
    lat = np.array([o.latitude_deg for o in obs])
    lon = np.array([o.longitude_deg for o in obs])
    steps = haversine_km(lat[:-1], lon[:-1], lat[1:], lon[1:])
    path = float(np.sum(steps))
    net = haversine_km(lat[0], lon[0], lat[-1], lon[-1])
    duration = (obs[-1].time_utc - obs[0].time_utc).total_seconds()
    heading = initial_bearing_deg(lat[0], lon[0], lat[-1], lon[-1]) if net > 0 else 0.0
    return Kinematics(
        path_length_km=path,
        net_displacement_km=net,
        duration_s=duration,
        mean_speed_ms=1000.0 * path / duration,
        net_speed_ms=1000.0 * net / duration,
        mean_heading_deg=heading,
    )


@dataclass
class AssociationResult:
    matched: list
    new: list
    ended: list
    active: list


def associate(tracks_active, clusters, dt_s, cfg: TrackerConfig = TrackerConfig(), next_track_id=None):
    """
    Extend active tracks with the clusters of one new volume.

    Candidate (track, cluster) pairs are taken in ascending centroid distance;
    ties go to the older track, then to the larger cluster. A pair is eligible
    when the distance is within ``max_association_speed_ms * dt_s`` scaled by
    the number of volumes since the track was last seen. Each cluster joins at
    most one track; leftovers seed new tracks. Tracks unmatched for more than
    ``max_missed_scans`` consecutive volumes end.

    Tracks are updated in place.
    """
    if not dt_s > 0:
        raise ValueError("dt_s must be positive")
    tracks = list(tracks_active)
    clusters = list(clusters)
    times = {c.start_time_utc for c in clusters}
    if len(times) > 1:
        raise ValueError("clusters must come from a single volume")
    if times:
        (t,) = times
        for trk in tracks:
            if trk.observations and trk.last.time_utc >= t:
                raise NonMonotonicTime(f"volume at {t} predates track {trk.track_id} clock {trk.last.time_utc}")
    if next_track_id is None:
        next_track_id = max((trk.track_id for trk in tracks), default=-1) + 1

    candidates = []
    for ti, trk in enumerate(tracks):
        gate_km = cfg.max_association_speed_ms * dt_s * (trk.missed_scans + 1) / 1000.0
        for ci, c in enumerate(clusters):
            d = haversine_km(trk.last.latitude_deg, trk.last.longitude_deg, c.centroid_lat_deg, c.centroid_lon_deg)
            if d <= gate_km:
                candidates.append((d, trk.track_id, -c.gate_count, ci, ti))
    candidates.sort()

    used_tracks, used_clusters = set(), set()
    matched = []
    for _, _, _, ci, ti in candidates:
        if ti in used_tracks or ci in used_clusters:
            continue
        used_tracks.add(ti)
        used_clusters.add(ci)
        trk = tracks[ti]
        trk.append(Observation.from_cluster(clusters[ci]))
        trk.missed_scans = 0
        matched.append(trk)

    ended, still_active = [], []
    for ti, trk in enumerate(tracks):
        if ti not in used_tracks:
            trk.missed_scans += 1
            if trk.missed_scans > cfg.max_missed_scans:
                trk.status = TrackStatus.ENDED
                ended.append(trk)
                continue
        still_active.append(trk)

    new = []
    for ci, c in enumerate(clusters):
        if ci in used_clusters:
            continue
        trk = SwarmTrack(track_id=next_track_id, observations=[Observation.from_cluster(c)])
        next_track_id += 1
        new.append(trk)
    return AssociationResult(matched=matched, new=new, ended=ended, active=still_active + new)


class SwarmTracker:
    """
    Single-writer tracking state machine.

    Feed volumes in time order through :meth:`update`; read ``tracks`` between
    updates.
    """

    def __init__(self, cfg: TrackerConfig = TrackerConfig()):
        self.cfg = cfg
        self.active: list[SwarmTrack] = []
        self.ended: list[SwarmTrack] = []
        self.clock: datetime | None = None
        self._next_id = 0

    def update(self, time_utc: datetime, clusters) -> AssociationResult:
        if self.clock is not None and time_utc <= self.clock:
            raise NonMonotonicTime(f"volume at {time_utc} does not follow tracker clock {self.clock}")
        clusters = list(clusters)
        if any(c.start_time_utc != time_utc for c in clusters):
            raise ValueError("cluster times must equal the volume time")
        dt = (time_utc - self.clock).total_seconds() if self.clock is not None else 1.0
        result = associate(self.active, clusters, dt, self.cfg, next_track_id=self._next_id)
        self._next_id += len(result.new)
        self.active = result.active
        self.ended.extend(result.ended)
        self.clock = time_utc
        return result

    @property
    def tracks(self) -> list[SwarmTrack]:
        return sorted(self.ended + self.active, key=lambda t: t.track_id)

    def swarm_tracks(self) -> list[SwarmTrack]:
        """Tracks long enough to count as swarms rather than candidates."""
        return [t for t in self.tracks if len(t.observations) >= self.cfg.min_track_observations]


def lead_time_estimate(track: SwarmTrack, site: RadarSite, range_limit_km: float = 150.0) -> float:
    """
    Hours until the swarm reaches the radar site at its observed closing rate.

    The closing rate is the decrease of centroid-to-site distance from the
    first to the last observation divided by the track duration. Returns
    :data:`NOT_APPROACHING` (infinity) when the last step did not bring the
    swarm closer or the net closing rate is not positive.
    """
    obs = track.observations
    if len(obs) < 2:
        raise InsufficientObservations(f"track {track.track_id} has {len(obs)} observation(s)")
    dist = [haversine_km(o.latitude_deg, o.longitude_deg, site.latitude_deg, site.longitude_deg) for o in obs]
    if dist[-1] > range_limit_km:
        raise OutOfCoverage(f"centroid is {dist[-1]:.1f} km out, beyond {range_limit_km} km")
    duration_h = (obs[-1].time_utc - obs[0].time_utc).total_seconds() / 3600.0
    closing_kmh = (dist[0] - dist[-1]) / duration_h
    if dist[-1] >= dist[-2] or closing_kmh <= 0:
        return NOT_APPROACHING
    return dist[-1] / closing_kmh
