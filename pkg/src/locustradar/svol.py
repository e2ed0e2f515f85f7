"""
SVOL: a small, portable, bit-exact container for polar volume scans.

Layout::

    SVOL1\\n
    key: value\\n          (fixed key set, written in HEADER_KEYS order)
    ...
    \\n                    (blank line ends the header)
    per sweep:
        azimuths  rays          x uint16 LE, scale 0.01 deg
        Z         rays x gates  x int16 LE, scale 0.01, -32768 = no data
        V         rays x gates  x int16 LE
        W         rays x gates  x int16 LE

Header numbers use Python's shortest round-trip float repr.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ParseError, ValidationError
from .geometry import RadarSite, VcpDefinition
from .volume import Sweep, VolumeScan, format_utc, parse_utc

MAGIC = b"SVOL1"
NO_DATA_RAW = -32768
SCALE = 100.0

HEADER_KEYS = (
    "site_id",
    "latitude_deg",
    "longitude_deg",
    "antenna_height_m",
    "band",
    "start_time_utc",
    "n_sweeps",
    "first_gate_range_m",
    "gate_spacing_m",
    "rays_per_sweep",
    "gates_per_ray",
    "cadence_s",
    "elevations_deg",
    "sweep_elevations_deg",
)

_I16 = np.dtype("<i2")
_U16 = np.dtype("<u2")


def quantize(values) -> np.ndarray:
    """Snap moment values onto the 0.01 fixed-point grid (NaN preserved)."""
    arr = np.asarray(values, dtype=np.float64)
    # adding 0.0 turns -0.0 into +0.0; the int16 encoding has no signed zero
    return (np.round(arr * SCALE) / SCALE + 0.0).astype(np.float32)


def _encode_moment(grid: np.ndarray) -> bytes:
    g = grid.astype(np.float64)
    raw = np.full(g.shape, NO_DATA_RAW, dtype=np.int64)
    present = ~np.isnan(g)
    raw[present] = np.round(g[present] * SCALE)
    if np.any(raw[present] <= NO_DATA_RAW) or np.any(raw[present] > 32767):
        raise ValidationError("moment value outside the int16 fixed-point range")
    return raw.astype(_I16).tobytes()


def _decode_moment(buf: bytes, shape) -> np.ndarray:
    raw = np.frombuffer(buf, dtype=_I16).reshape(shape)
    out = raw.astype(np.float64) / SCALE
    out[raw == NO_DATA_RAW] = np.nan
    return out.astype(np.float32)


def _fmt(x) -> str:
    return repr(float(x))


def _header_lines(v: VolumeScan):
    s, vcp = v.site, v.vcp
    values = {
        "site_id": s.site_id,
        "latitude_deg": _fmt(s.latitude_deg),
        "longitude_deg": _fmt(s.longitude_deg),
        "antenna_height_m": _fmt(s.antenna_height_m),
        "band": s.band.value,
        "start_time_utc": format_utc(v.start_time_utc),
        "n_sweeps": str(len(v.sweeps)),
        "first_gate_range_m": _fmt(vcp.first_gate_range_m),
        "gate_spacing_m": _fmt(vcp.gate_spacing_m),
        "rays_per_sweep": str(vcp.rays_per_sweep),
        "gates_per_ray": str(vcp.gates_per_ray),
        "cadence_s": _fmt(vcp.cadence_s),
        "elevations_deg": ",".join(_fmt(e) for e in vcp.elevation_angles_deg),
        "sweep_elevations_deg": ",".join(_fmt(sw.elevation_deg) for sw in v.sweeps),
    }
    return [f"{k}: {values[k]}" for k in HEADER_KEYS]


def encode_volume(v: VolumeScan) -> bytes:
    v.validate()
    if not v.site.site_id.isascii():
        raise ValidationError("site_id must be ASCII")
    head = MAGIC + b"\n" + "\n".join(_header_lines(v)).encode("ascii") + b"\n\n"
    parts = [head]
    for sw in v.sweeps:
        az = np.round(sw.ray_azimuths_deg * SCALE)
        if np.any(az >= 36000):
            raise ValidationError("azimuth rounds to 360 degrees")
        parts.append(az.astype(_U16).tobytes())
        for name in "ZVW":
            parts.append(_encode_moment(sw.moment(name)))
    return b"".join(parts)


def write_volume(v: VolumeScan, path) -> None:
    """Serialise ``v`` to ``path``; identical volumes produce identical bytes."""
    data = encode_volume(v)
    with open(path, "wb") as fh:
        fh.write(data)


def _parse_header(data: bytes):
    if not data.startswith(MAGIC + b"\n"):
        raise ParseError("bad magic (expected 'SVOL1')", offset=0)
    end = data.find(b"\n\n", len(MAGIC))
    if end < 0:
        raise ParseError("header not terminated by a blank line", offset=len(data))
    header = {}
    offset = len(MAGIC) + 1
    for line in data[offset:end].split(b"\n"):
        try:
            text = line.decode("ascii")
        except UnicodeDecodeError:
            raise ParseError("non-ASCII header line", offset=offset) from None
        key, sep, value = text.partition(": ")
        if not sep:
            raise ParseError(f"malformed header line {text!r}", offset=offset)
        if key not in HEADER_KEYS:
            raise ParseError(f"unknown header key {key!r}", offset=offset)
        if key in header:
            raise ParseError(f"duplicate header key {key!r}", offset=offset)
        header[key] = (value, offset)
        offset += len(line) + 1
    missing = [k for k in HEADER_KEYS if k not in header]
    if missing:
        raise ParseError(f"missing header keys: {', '.join(missing)}", offset=end)
    return header, end + 2


def _typed_header(header):
    def get(key, conv):
        value, off = header[key]
        try:
            return conv(value)
        except ValueError as exc:
            raise ParseError(f"{key}: {exc}", offset=off) from None

    def floats(text):
        return tuple(float(x) for x in text.split(",")) if text else ()

    def count(text):
        n = int(text)
        if n < 0:
            raise ValueError("must be non-negative")
        return n

    return {
        "site_id": get("site_id", str),
        "latitude_deg": get("latitude_deg", float),
        "longitude_deg": get("longitude_deg", float),
        "antenna_height_m": get("antenna_height_m", float),
        "band": get("band", str),
        "start_time_utc": get("start_time_utc", parse_utc),
        "n_sweeps": get("n_sweeps", count),
        "first_gate_range_m": get("first_gate_range_m", float),
        "gate_spacing_m": get("gate_spacing_m", float),
        "rays_per_sweep": get("rays_per_sweep", count),
        "gates_per_ray": get("gates_per_ray", count),
        "cadence_s": get("cadence_s", float),
        "elevations_deg": get("elevations_deg", floats),
        "sweep_elevations_deg": get("sweep_elevations_deg", floats),
    }


def decode_header(data: bytes):
    """Parse only the ASCII header; returns ``(fields, payload_offset)``."""
    header, payload_at = _parse_header(data)
    return _typed_header(header), payload_at


def decode_volume(data: bytes) -> VolumeScan:
    h, pos = decode_header(data)
    if len(h["sweep_elevations_deg"]) != h["n_sweeps"]:
        raise ParseError(
            f"dimension mismatch: n_sweeps={h['n_sweeps']} but "
            f"{len(h['sweep_elevations_deg'])} sweep elevations listed",
            offset=pos,
        )
    try:
        site = RadarSite(
            h["site_id"], h["latitude_deg"], h["longitude_deg"], h["antenna_height_m"], h["band"]
        )
        vcp = VcpDefinition(
            elevation_angles_deg=h["elevations_deg"],
            cadence_s=h["cadence_s"],
            first_gate_range_m=h["first_gate_range_m"],
            gate_spacing_m=h["gate_spacing_m"],
            gates_per_ray=h["gates_per_ray"],
            rays_per_sweep=h["rays_per_sweep"],
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    rays, gates = vcp.rays_per_sweep, vcp.gates_per_ray
    az_bytes = rays * _U16.itemsize
    grid_bytes = rays * gates * _I16.itemsize
    sweeps = []
    for i, elev in enumerate(h["sweep_elevations_deg"]):
        blocks = [("azimuth", az_bytes)] + [(m, grid_bytes) for m in "ZVW"]
        raw = {}
        for name, size in blocks:
            if pos + size > len(data):
                raise ParseError(
                    f"truncated payload: sweep {i} {name} block needs {size} bytes, "
                    f"{len(data) - pos} available",
                    offset=pos,
                )
            raw[name] = data[pos : pos + size]
            pos += size
        az = np.frombuffer(raw["azimuth"], dtype=_U16).astype(np.float64) / SCALE
        sweeps.append(
            Sweep(
                elev,
                az,
                _decode_moment(raw["Z"], (rays, gates)),
                _decode_moment(raw["V"], (rays, gates)),
                _decode_moment(raw["W"], (rays, gates)),
            )
        )
    if pos != len(data):
        raise ParseError(f"{len(data) - pos} trailing bytes after last sweep", offset=pos)
    return VolumeScan(site, vcp, h["start_time_utc"], tuple(sweeps)).validate()


def read_volume(path) -> VolumeScan:
    with open(path, "rb") as fh:
        return decode_volume(fh.read())


def read_volume_time(path):
    """Start time of a volume file, read from the header only."""
    with open(path, "rb") as fh:
        head = fh.read(4096)
        while b"\n\n" not in head:
            more = fh.read(4096)
            if not more:
                break
            head += more
    h, _ = decode_header(head)
    return h["start_time_utc"]


def list_volumes(directory):
    """SVOL files in ``directory`` ordered by embedded start time, not by name."""
    paths = [
        os.path.join(directory, name)
        for name in os.listdir(directory)
        if name.endswith(".svol")
    ]
    return sorted(paths, key=lambda p: (read_volume_time(p), p))
