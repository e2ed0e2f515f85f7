import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locustradar.errors import CeilingBelowAntenna, ValidationError
from locustradar.geometry import (
    EFFECTIVE_RADIUS_KM,
    LUCKNOW_SITE,
    LUCKNOW_VCP,
    RadarSite,
    beam_height,
    destination_point,
    final_bearing_deg,
    gate_geolocate,
    gate_range,
    geolocate_gates,
    haversine_km,
    initial_bearing_deg,
    max_analysis_range,
    vcp_curves,
)

RE = EFFECTIVE_RADIUS_KM


def small_angle_height(s_km, el_deg):
    return s_km * math.sin(math.radians(el_deg)) + s_km**2 / (2 * RE)


def closed_form_range(el_deg, antenna_m, ceiling_km):
    # invert the exact 4/3-earth expression for S
    s = math.sin(math.radians(el_deg))
    c = ceiling_km - antenna_m / 1000.0 + RE
    return -RE * s + math.sqrt((RE * s) ** 2 + c * c - RE * RE)


def test_gate_range_examples():
    assert gate_range(0, 250, 0) == 0
    assert gate_range(0, 250, 4) == 1000
    assert gate_range(150, 250, 599) == 149_900
    assert gate_range(150, 250, 599) == 150 + sum([250] * 599)
    with pytest.raises(ValueError):
        gate_range(0, 0, 3)


def test_beam_height_examples():
    assert beam_height(0, 7.3, 100) == pytest.approx(0.100, abs=1e-12)
    assert beam_height(150, 0.2, 0) == pytest.approx(small_angle_height(150, 0.2), rel=5e-3)
    assert beam_height(150, 0.2, 0) == pytest.approx(1.848, abs=2e-3)
    assert beam_height(100, 0.2, 0) == pytest.approx(0.938, abs=2e-3)


def test_beam_height_broadcasts():
    s = np.array([0.0, 50.0, 150.0])
    h = beam_height(s, 0.2, 0.0)
    assert h.shape == (3,)
    assert h[2] == beam_height(150.0, 0.2, 0.0)


@given(
    st.floats(0, 300), st.floats(0, 300), st.floats(0, 89.9), st.floats(0, 89.9), st.floats(0, 3000)
)
def test_beam_height_monotone(s1, s2, e1, e2, hr):
    lo_s, hi_s = sorted((s1, s2))
    lo_e, hi_e = sorted((e1, e2))
    assert beam_height(lo_s, lo_e, hr) <= beam_height(hi_s, lo_e, hr) + 1e-12
    assert beam_height(lo_s, lo_e, hr) <= beam_height(lo_s, hi_e, hr) + 1e-12


@given(st.floats(0, 300), st.floats(0, 89.9), st.floats(0, 3000))
def test_antenna_height_is_additive(s, el, hr):
    assert beam_height(s, el, hr) - beam_height(s, el, 0) == pytest.approx(hr / 1000.0, abs=1e-9)


def test_max_analysis_range_examples():
    r = max_analysis_range(0.2, 0, 2.0)
    assert 150 <= r <= 160
    assert 1.99 <= beam_height(r, 0.2, 0) <= 2.0
    assert r == pytest.approx(closed_form_range(0.2, 0, 2.0), abs=1e-5)
    assert max_analysis_range(0.2, 0, 0.0001) == pytest.approx(closed_form_range(0.2, 0, 0.0001), abs=1e-5)
    assert max_analysis_range(0.2, 0, 0.0001) < 2.0
    assert max_analysis_range(21.0, 0, 2.0) == pytest.approx(2.0 / math.sin(math.radians(21.0)), rel=0.01)


def test_max_analysis_range_rejects_low_ceiling():
    with pytest.raises(CeilingBelowAntenna):
        max_analysis_range(0.2, 2000, 2.0)
    with pytest.raises(CeilingBelowAntenna):
        max_analysis_range(0.2, 2000, 1.0)


@settings(max_examples=60)
@given(st.floats(0.05, 45), st.floats(0, 1500), st.floats(1.6, 6))
def test_max_analysis_range_bracket(el, hr, ceiling):
    r = max_analysis_range(el, hr, ceiling)
    assert beam_height(r, el, hr) <= ceiling
    assert beam_height(r + 0.01, el, hr) > ceiling
    assert r == pytest.approx(closed_form_range(el, hr, ceiling), abs=1e-4)


def test_geolocate_examples():
    site = RadarSite("EQ", 0.0, 0.0, 50.0, "C")
    g = gate_geolocate(site, 123.0, 4.0, 0.0)
    assert (g.latitude_deg, g.longitude_deg) == pytest.approx((0.0, 0.0))
    assert g.height_km_msl == pytest.approx(0.05)
    east = gate_geolocate(site, 90.0, 0.0, 111_195.0)
    assert east.latitude_deg == pytest.approx(0.0, abs=1e-9)
    assert east.longitude_deg == pytest.approx(1.0, abs=1e-4)
    north = gate_geolocate(LUCKNOW_SITE, 0.0, 0.0, 111_195.0)
    assert north.latitude_deg - LUCKNOW_SITE.latitude_deg == pytest.approx(1.0, abs=1e-4)
    assert north.longitude_deg == pytest.approx(LUCKNOW_SITE.longitude_deg, abs=1e-9)


def test_geolocate_gates_matches_scalar():
    az = np.array([10.5, 200.5])
    ranges = np.array([125.0, 50_125.0, 120_125.0])
    lat, lon, h = geolocate_gates(LUCKNOW_SITE, az, 1.0, ranges)
    assert lat.shape == (2, 3)
    g = gate_geolocate(LUCKNOW_SITE, 200.5, 1.0, 50_125.0)
    assert (lat[1, 1], lon[1, 1], h[1, 1]) == pytest.approx((g.latitude_deg, g.longitude_deg, g.height_km_msl))


@given(
    st.floats(-60, 60), st.floats(-179, 179), st.floats(0, 359.99), st.floats(0.5, 500)
)
def test_destination_inverts_bearing_and_distance(lat, lon, brg, d):
    lat2, lon2 = destination_point(lat, lon, brg, d)
    assert haversine_km(lat, lon, lat2, lon2) == pytest.approx(d, rel=1e-9, abs=1e-9)
    back = initial_bearing_deg(lat, lon, lat2, lon2)
    assert min(abs(back - brg), 360 - abs(back - brg)) < 1e-6


def test_haversine_and_bearings():
    assert haversine_km(0, 0, 0, 1) == pytest.approx(2 * math.pi * 6371 / 360)
    assert haversine_km(10, 20, 10, 20) == 0
    assert initial_bearing_deg(0, 0, 0, 1) == pytest.approx(90)
    assert initial_bearing_deg(0, 0, -1, 0) == pytest.approx(180)
    assert 0 <= initial_bearing_deg(0, 0, 1, -1e-9) < 360
    assert final_bearing_deg(0, 0, 0, 1) == pytest.approx(90)


def test_site_validation():
    with pytest.raises(ValidationError):
        RadarSite("X", 91.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        RadarSite("X", 0.0, 0.0, 0.0, "K")


def test_vcp_curves_cover_every_elevation():
    rows = vcp_curves(LUCKNOW_SITE, LUCKNOW_VCP)
    elevs = sorted({r[0] for r in rows})
    assert elevs == sorted(LUCKNOW_VCP.elevation_angles_deg)
    assert all(len(r) == 3 for r in rows)
