import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from landmark_maximin.geometry import (
    Constellation,
    Disc,
    GeometryConfig,
    InfeasibleGeometryError,
    PlanarPose,
    Rect,
    all_permutations,
    angular_distance,
    contains,
    disc_set_distance,
    rotate,
    wrap_angle,
)

angles = st.floats(-4 * math.pi, 4 * math.pi, allow_nan=False)
coords = st.floats(-1e3, 1e3, allow_nan=False)


@pytest.mark.parametrize("theta, v, expected", [
    (0.0, (3, 4), (3, 4)),
    (math.pi / 2, (1, 0), (0, 1)),
    (2 * math.pi / 3, (1, 0), (-0.5, math.sqrt(3) / 2)),
])
def test_rotate_examples(theta, v, expected):
    np.testing.assert_allclose(rotate(theta, v), expected, atol=1e-15)


def test_rotate_stack_matches_single():
    pts = np.array([[1.0, 2.0], [-3.0, 0.5]])
    out = rotate(0.7, pts)
    for p, o in zip(pts, out):
        np.testing.assert_array_equal(rotate(0.7, p), o)


def test_rotate_rejects_nonfinite():
    with pytest.raises(ValueError):
        rotate(float("nan"), (1, 0))


@given(angles, coords, coords)
def test_rotate_preserves_norm(theta, x, y):
    n0 = math.hypot(x, y)
    n1 = math.hypot(*rotate(theta, (x, y)))
    assert abs(n1 - n0) <= 4 * np.spacing(max(n0, np.finfo(float).tiny))


@given(angles, angles, st.floats(0, 2 * math.pi))
def test_rotate_composition(t1, t2, phi):
    v = (math.cos(phi), math.sin(phi))
    np.testing.assert_allclose(rotate(t2, rotate(t1, v)), rotate(t1 + t2, v), atol=1e-12)


@pytest.mark.parametrize("theta, expected", [
    (0.0, 0.0), (3 * math.pi, -math.pi), (-math.pi / 4, -math.pi / 4), (math.pi, -math.pi),
])
def test_wrap_angle_examples(theta, expected):
    assert wrap_angle(theta) == pytest.approx(expected, abs=1e-15)


@given(st.floats(-1e4, 1e4, allow_nan=False))
def test_wrap_angle_range_and_congruence(theta):
    w = wrap_angle(theta)
    assert -math.pi <= w < math.pi
    k = (theta - w) / (2 * math.pi)
    assert abs(k - round(k)) < 1e-9


@pytest.mark.parametrize("a, b, expected", [
    (0.0, 0.0, 0.0), (0.0, 3 * math.pi / 2, math.pi / 2), (-math.pi / 2, math.pi / 2, math.pi),
])
def test_angular_distance_examples(a, b, expected):
    assert angular_distance(a, b) == pytest.approx(expected, abs=1e-15)


@given(angles, angles, angles)
def test_angular_distance_is_a_metric(a, b, c):
    dab, dba = angular_distance(a, b), angular_distance(b, a)
    assert 0 <= dab <= math.pi
    assert dab == pytest.approx(dba, abs=1e-12)
    assert angular_distance(a, a + 2 * math.pi) == pytest.approx(0.0, abs=1e-12)
    assert angular_distance(a, c) <= dab + angular_distance(b, c) + 1e-12


@pytest.mark.parametrize("a, b, expected", [
    (Disc((0, 0), 2), Disc((0, 0), 5), 0.0),
    (Disc((0, 0), 2), Disc((10, 0), 3), 5.0),
    (Disc((0, 0), 2), Disc((4, 0), 3), 0.0),
])
def test_disc_set_distance_examples(a, b, expected):
    assert disc_set_distance(a, b) == expected


@given(coords, coords, st.floats(0, 100), coords, coords, st.floats(0, 100))
def test_disc_set_distance_symmetric(x1, y1, r1, x2, y2, r2):
    a, b = Disc((x1, y1), r1), Disc((x2, y2), r2)
    assert disc_set_distance(a, b) == disc_set_distance(b, a)
    if math.hypot(x1 - x2, y1 - y2) <= max(r1, r2):
        assert disc_set_distance(a, b) == 0.0


def test_contains_examples():
    assert contains(Disc((0, 0), 1), (0, 0))
    assert contains(Disc((0, 0), 1), (1, 0))
    assert not contains(Rect((0, 0), 1, 2), (1.1, 0))
    assert contains(Rect((0, 0), 1, 2), (1, -2))


def test_pose_wraps_yaw():
    assert PlanarPose((0, 0), 3 * math.pi).yaw == pytest.approx(-math.pi)
    with pytest.raises(ValueError):
        PlanarPose((0, float("inf")), 0.0)


def test_rect_clamp_and_semi_diagonal():
    r = Rect((1, 1), 3, 4)
    assert r.d_semi == 5.0
    np.testing.assert_array_equal(r.clamp([[10, -10], [1, 2]]), [[4, -3], [1, 2]])


def test_geometry_config_feasibility():
    GeometryConfig.centered(r_a=15, r_outer=50, half_width=4, half_height=9.5,
                            r_res=1, beta_res=0.1, r_sense=30)
    with pytest.raises(InfeasibleGeometryError, match="R_a \\+ d_semi <= R_sense"):
        GeometryConfig.centered(r_a=15, r_outer=50, half_width=4, half_height=9.5,
                                r_res=1, beta_res=0.1, r_sense=20)
    with pytest.raises(InfeasibleGeometryError, match="center"):
        GeometryConfig(Disc((0, 0), 1), Disc((1, 0), 2), Rect((0, 0), 1, 1), 1, 0.1, 10)
    with pytest.raises(InfeasibleGeometryError):
        GeometryConfig.centered(r_a=5, r_outer=4, half_width=1, half_height=1,
                                r_res=1, beta_res=0.1, r_sense=10)


def test_constellation_centroid_is_fresh():
    c = Constellation([[0, 0], [2, 0], [1, 3]])
    np.testing.assert_allclose(c.centroid, [1, 1])
    assert c.m == 3
    with pytest.raises(ValueError):
        c.points[0, 0] = 5.0
    with pytest.raises(ValueError):
        Constellation([[0, float("nan")]])


def test_all_permutations_lexicographic():
    perms = all_permutations(3)
    assert [tuple(p) for p in perms] == [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
