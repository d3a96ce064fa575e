"""Multi-blade coordinate transform algebra."""

import math

import numpy as np
import pytest

from helixwake.mbc import (AzimuthState, BladeTriple, FixedFrameTriple,
                           azimuth_advance, forward_mbc, inverse_mbc,
                           inverse_matrix, transform_matrix)

TWO_THIRDS_PI = 2.0 * math.pi / 3.0


def test_blade_azimuths_are_evenly_spaced():
    az = AzimuthState(psi_1=0.3)
    angles = az.angles
    assert angles[0] == pytest.approx(0.3)
    assert angles[1] == pytest.approx(0.3 + TWO_THIRDS_PI)
    assert angles[2] == pytest.approx(0.3 + 2.0 * TWO_THIRDS_PI)


def test_azimuth_wraps_into_one_turn():
    az = AzimuthState(psi_1=2.0 * math.pi + 0.25)
    assert az.psi_1 == pytest.approx(0.25)
    az = AzimuthState(psi_1=-0.25)
    assert 0.0 <= az.psi_1 < 2.0 * math.pi
    assert az.psi_1 == pytest.approx(2.0 * math.pi - 0.25)


def test_transform_matrix_at_zero_azimuth():
    t = transform_matrix(AzimuthState(0.0))
    expected = np.array([
        [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        [2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0],
        [0.0, 1.0 / math.sqrt(3.0), -1.0 / math.sqrt(3.0)],
    ])
    np.testing.assert_allclose(t, expected, atol=1e-15)


def test_inverse_matrix_rows():
    az = AzimuthState(0.7)
    inv = inverse_matrix(az)
    for b in range(3):
        psi_b = 0.7 + b * TWO_THIRDS_PI
        np.testing.assert_allclose(
            inv[b], [1.0, math.cos(psi_b), math.sin(psi_b)], atol=1e-15)


def test_matrices_are_mutual_inverses():
    rng = np.random.default_rng(7)
    for _ in range(50):
        az = AzimuthState(rng.uniform(0.0, 2.0 * math.pi))
        prod = transform_matrix(az) @ inverse_matrix(az)
        np.testing.assert_allclose(prod, np.eye(3), atol=1e-14)


def test_round_trip_identity():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        az = AzimuthState(rng.uniform(0.0, 2.0 * math.pi))
        blades = BladeTriple(*rng.uniform(-10.0, 10.0, 3))
        back = inverse_mbc(az, forward_mbc(az, blades))
        np.testing.assert_allclose(back.as_array(), blades.as_array(),
                                   atol=1e-12)


def test_fixed_frame_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(200):
        az = AzimuthState(rng.uniform(0.0, 2.0 * math.pi))
        ff = FixedFrameTriple(*rng.uniform(-5.0, 5.0, 3))
        back = forward_mbc(az, inverse_mbc(az, ff))
        np.testing.assert_allclose(back.as_array(), ff.as_array(), atol=1e-12)


def test_pure_collective_has_no_tilt_yaw():
    rng = np.random.default_rng(11)
    for _ in range(100):
        az = AzimuthState(rng.uniform(0.0, 2.0 * math.pi))
        c = rng.uniform(-20.0, 20.0)
        ff = forward_mbc(az, BladeTriple(c, c, c))
        assert ff.collective == pytest.approx(c, abs=1e-13)
        assert abs(ff.tilt) < 1e-14 * max(1.0, abs(c))
        assert abs(ff.yaw) < 1e-14 * max(1.0, abs(c))


def test_pure_tilt_projects_on_cosine():
    az = AzimuthState(0.0)
    blades = inverse_mbc(az, FixedFrameTriple(0.0, 1.0, 0.0))
    np.testing.assert_allclose(
        blades.as_array(),
        [math.cos(0.0), math.cos(TWO_THIRDS_PI), math.cos(2 * TWO_THIRDS_PI)],
        atol=1e-15)


def test_unit_tag_carried_through():
    az = AzimuthState(1.0)
    ff = forward_mbc(az, BladeTriple(1.0, 2.0, 3.0, unit="N*m"))
    assert ff.unit == "N*m"
    back = inverse_mbc(az, ff)
    assert back.unit == "N*m"


def test_azimuth_advance():
    az = AzimuthState(0.5)
    out = azimuth_advance(az, rotor_speed=1.2671090369478832, dt=0.1)
    assert out.psi_1 == pytest.approx(0.5 + 0.12671090369478832, rel=1e-15)


def test_azimuth_advance_wraps():
    az = AzimuthState(6.2)
    out = azimuth_advance(az, rotor_speed=1.0, dt=0.5)
    assert 0.0 <= out.psi_1 < 2.0 * math.pi
    assert out.psi_1 == pytest.approx(6.7 - 2.0 * math.pi, rel=1e-12)


def test_azimuth_advance_rejects_bad_input():
    az = AzimuthState(0.0)
    with pytest.raises(ValueError):
        azimuth_advance(az, rotor_speed=-1.0, dt=0.1)
    with pytest.raises(ValueError):
        azimuth_advance(az, rotor_speed=1.0, dt=0.0)
    with pytest.raises(ValueError):
        azimuth_advance(az, rotor_speed=math.nan, dt=0.1)
