"""Rain-gauge records and gridded wind extracts (local CSV files)."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import datetime

import numpy as np

from .errors import IrregularGridError, ParseError, ValidationError
from .volume import format_utc, parse_utc

RAIN_HEADER = ["station_id", "lat", "lon", "window_start", "window_end", "rainfall_mm"]
WIND_HEADER = ["lat", "lon", "u", "v"]
_GRID_TOL_DEG = 1e-6


@dataclass(frozen=True)
class RainRecord:
    station_id: str
    latitude_deg: float
    longitude_deg: float
    window_start_utc: datetime
    window_end_utc: datetime
    rainfall_mm: float

    def __post_init__(self):
        if not self.window_start_utc < self.window_end_utc:
            raise ValidationError("window_start must precede window_end")
        if not self.rainfall_mm >= 0:
            raise ValidationError(f"negative rainfall {self.rainfall_mm} mm")
        if not (-90 <= self.latitude_deg <= 90 and -180 <= self.longitude_deg <= 180):
            raise ValidationError("station coordinates out of range")


def read_rain_records(path) -> list[RainRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_rain_records(fh.read())


def parse_rain_records(text: str) -> list[RainRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file", row=1) from None
    if [h.strip() for h in header] != RAIN_HEADER:
        raise ParseError(f"expected header {','.join(RAIN_HEADER)}", row=1)
    records = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(RAIN_HEADER):
            raise ParseError(f"expected {len(RAIN_HEADER)} fields, got {len(row)}", row=row_no)
        try:
            records.append(
                RainRecord(
                    station_id=row[0].strip(),
                    latitude_deg=float(row[1]),
                    longitude_deg=float(row[2]),
                    window_start_utc=parse_utc(row[3]),
                    window_end_utc=parse_utc(row[4]),
                    rainfall_mm=float(row[5]),
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), row=row_no) from None
    return records


def write_rain_records(records, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(RAIN_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.station_id,
                    repr(float(r.latitude_deg)),
                    repr(float(r.longitude_deg)),
                    format_utc(r.window_start_utc),
                    format_utc(r.window_end_utc),
                    repr(float(r.rainfall_mm)),
                ]
            )


@dataclass(frozen=True, eq=False)
class WindField:
    """
    Regular lat/lon grid of wind components.

    ``u_ms`` and ``v_ms`` are shaped ``(ny, nx)``; row ``j`` sits at latitude
    ``grid_lat0_deg + j * cell_deg``. Components are the eastward and
    northward velocity of the air, so ``(u, v)`` points where the wind blows to.
    """

    grid_lat0_deg: float
    grid_lon0_deg: float
    cell_deg: float
    nx: int
    ny: int
    u_ms: np.ndarray
    v_ms: np.ndarray
    level_hpa: float
    valid_time_utc: datetime

    def __post_init__(self):
        u = np.array(self.u_ms, dtype=float)
        v = np.array(self.v_ms, dtype=float)
        if u.shape != v.shape or u.shape != (self.ny, self.nx):
            raise ValidationError(f"u{u.shape} / v{v.shape} do not match ny x nx = {self.ny} x {self.nx}")
        if not self.cell_deg > 0:
            raise ValidationError("cell_deg must be positive")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u_ms", u)
        object.__setattr__(self, "v_ms", v)

    def __eq__(self, other):
        if not isinstance(other, WindField):
            return NotImplemented
        return (
            (self.grid_lat0_deg, self.grid_lon0_deg, self.cell_deg, self.nx, self.ny)
            == (other.grid_lat0_deg, other.grid_lon0_deg, other.cell_deg, other.nx, other.ny)
            and self.level_hpa == other.level_hpa
            and self.valid_time_utc == other.valid_time_utc
            and np.array_equal(self.u_ms, other.u_ms)
            and np.array_equal(self.v_ms, other.v_ms)
        )

    __hash__ = None

    def lats(self):
        return np.array([_axis_value(self.grid_lat0_deg, self.cell_deg, j) for j in range(self.ny)])

    def lons(self):
        return np.array([_axis_value(self.grid_lon0_deg, self.cell_deg, i) for i in range(self.nx)])

    def covers(self, lat, lon) -> bool:
        lat_max = self.grid_lat0_deg + (self.ny - 1) * self.cell_deg
        lon_max = self.grid_lon0_deg + (self.nx - 1) * self.cell_deg
        eps = 1e-9
        return (
            self.grid_lat0_deg - eps <= lat <= lat_max + eps
            and self.grid_lon0_deg - eps <= lon <= lon_max + eps
        )

    def sample(self, lat, lon):
        """Bilinearly interpolated ``(u, v)`` at a point, or ``None`` outside the grid."""
        if not self.covers(lat, lon):
            return None
        fy = (lat - self.grid_lat0_deg) / self.cell_deg
        fx = (lon - self.grid_lon0_deg) / self.cell_deg
        j0 = min(max(int(math.floor(fy)), 0), max(self.ny - 2, 0))
        i0 = min(max(int(math.floor(fx)), 0), max(self.nx - 2, 0))
        j1 = min(j0 + 1, self.ny - 1)
        i1 = min(i0 + 1, self.nx - 1)
        ty = min(max(fy - j0, 0.0), 1.0) if j1 != j0 else 0.0
        tx = min(max(fx - i0, 0.0), 1.0) if i1 != i0 else 0.0

        def interp(grid):
            top = grid[j0, i0] * (1 - tx) + grid[j0, i1] * tx
            bottom = grid[j1, i0] * (1 - tx) + grid[j1, i1] * tx
            return float(top * (1 - ty) + bottom * ty)

        return interp(self.u_ms), interp(self.v_ms)


def direction_of_travel_deg(u, v) -> float:
    """Compass bearing the air moves toward."""
    return math.degrees(math.atan2(u, v)) % 360.0


def direction_from_deg(u, v) -> float:
    """Meteorological convention: bearing the wind blows from."""
    return (direction_of_travel_deg(u, v) + 180.0) % 360.0


def _axis_value(origin, cell, index):
    return round(origin + index * cell, 10)


def _regular_axis(values, name):
    axis = np.unique(values)
    if axis.size == 1:
        return axis, None
    steps = np.diff(axis)
    cell = round(float((axis[-1] - axis[0]) / (axis.size - 1)), 10)
    if np.any(np.abs(steps - cell) > _GRID_TOL_DEG):
        raise IrregularGridError(f"{name} spacing is not uniform")
    return axis, cell


def parse_wind_field(text: str) -> WindField:
    lines = text.splitlines()
    meta = {}
    row_no = 0
    while row_no < len(lines) and lines[row_no].lstrip().startswith("#"):
        key, sep, value = lines[row_no].lstrip()[1:].partition(":")
        if not sep:
            raise ParseError("preamble lines must read '# key: value'", row=row_no + 1)
        meta[key.strip()] = value.strip()
        row_no += 1
    for key in ("level_hpa", "valid_time"):
        if key not in meta:
            raise ParseError(f"missing preamble entry {key!r}", row=row_no + 1)
    try:
        level = float(meta["level_hpa"])
        valid_time = parse_utc(meta["valid_time"])
    except ValueError as exc:
        raise ParseError(f"bad preamble value: {exc}", row=1) from None

    reader = csv.reader(lines[row_no:])
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("missing column header", row=row_no + 1) from None
    if [h.strip() for h in header] != WIND_HEADER:
        raise ParseError(f"expected header {','.join(WIND_HEADER)}", row=row_no + 1)
    data = []
    for offset, row in enumerate(reader, start=row_no + 2):
        if not row:
            continue
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", row=offset)
        try:
            data.append(tuple(float(x) for x in row))
        except ValueError as exc:
            raise ParseError(str(exc), row=offset) from None
    if not data:
        raise IrregularGridError("wind extract has no cells")
    arr = np.array(data)
    lat_axis, lat_cell = _regular_axis(arr[:, 0], "latitude")
    lon_axis, lon_cell = _regular_axis(arr[:, 1], "longitude")
    cells = [c for c in (lat_cell, lon_cell) if c is not None]
    if len(cells) == 2 and abs(cells[0] - cells[1]) > _GRID_TOL_DEG:
        raise IrregularGridError("latitude and longitude spacing differ")
    cell = cells[0] if cells else 0.25
    ny, nx = lat_axis.size, lon_axis.size
    u = np.full((ny, nx), np.nan)
    v = np.full((ny, nx), np.nan)
    jj = np.searchsorted(lat_axis, arr[:, 0])
    ii = np.searchsorted(lon_axis, arr[:, 1])
    seen = np.zeros((ny, nx), dtype=int)
    np.add.at(seen, (jj, ii), 1)
    if np.any(seen > 1):
        raise IrregularGridError("duplicate grid cell")
    if np.any(seen == 0):
        j, i = np.argwhere(seen == 0)[0]
        raise IrregularGridError(f"missing cell at lat {lat_axis[j]}, lon {lon_axis[i]}")
    u[jj, ii] = arr[:, 2]
    v[jj, ii] = arr[:, 3]
    return WindField(
        grid_lat0_deg=float(lat_axis[0]),
        grid_lon0_deg=float(lon_axis[0]),
        cell_deg=cell,
        nx=nx,
        ny=ny,
        u_ms=u,
        v_ms=v,
        level_hpa=level,
        valid_time_utc=valid_time,
    )


def read_wind_field(path) -> WindField:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_wind_field(fh.read())


def write_wind_field(wind: WindField, path) -> None:
    lats, lons = wind.lats(), wind.lons()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# level_hpa: {float(wind.level_hpa)!r}\r\n")
        fh.write(f"# valid_time: {format_utc(wind.valid_time_utc)}\r\n")
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(WIND_HEADER)
        for j, lat in enumerate(lats):
            for i, lon in enumerate(lons):
                writer.writerow(
                    [repr(float(lat)), repr(float(lon)), repr(float(wind.u_ms[j, i])), repr(float(wind.v_ms[j, i]))]
                )
