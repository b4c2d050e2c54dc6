import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from landmark_maximin.confounder import (
    SLIVER_DENSITY,
    FactorialBudgetError,
    GridSpec,
    evaluate_q,
    match_score,
    position_gap_sq,
    q_profile,
    theta_grid,
)
from landmark_maximin.geometry import GeometryConfig, rotate

from conftest import desk_geometry, equilateral

SMALL = GeometryConfig.centered(r_a=3.0, r_outer=10.0, half_width=4.0, half_height=3.0,
                                r_res=1.0, beta_res=0.1, r_sense=8.0)
TRIANGLE = np.array([[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]])


def test_match_score_frozen_value():
    # independently brute-forced: 2 * max_sigma sum_i z_i . R(pi/2) z_sigma(i)
    score, perm = match_score(TRIANGLE, math.pi / 2)
    assert score == pytest.approx(24.0, abs=1e-12)
    assert perm == (2, 0, 1)


@given(st.floats(0, 2 * math.pi), st.integers(0, 2 ** 31))
@settings(max_examples=40, deadline=None)
def test_match_score_equals_explicit_enumeration(theta, seed):
    pts = np.random.default_rng(seed).normal(size=(4, 2))
    rz = rotate(theta, pts)
    expected = max(2 * sum(pts[i] @ rz[s[i]] for i in range(4))
                   for s in itertools.permutations(range(4)))
    assert match_score(pts, theta)[0] == pytest.approx(expected, abs=1e-9)


def test_match_score_identity_at_zero():
    score, perm = match_score(TRIANGLE, 0.0)
    assert perm == (0, 1, 2)
    assert score == pytest.approx(2 * np.sum(TRIANGLE ** 2))


def test_evaluate_q_frozen_value():
    # brute-force reference gives 0.16652782406580996; closed form
    # 2 (1 - cos 0.1) * sum ||z_i - zbar||^2 with identity matching
    res = evaluate_q(TRIANGLE, SMALL)
    centered = TRIANGLE - TRIANGLE.mean(axis=0)
    closed = 2 * (1 - math.cos(0.1)) * np.sum(centered ** 2)
    assert res.q == pytest.approx(0.16652782406580996, rel=1e-9)
    assert res.q == pytest.approx(closed, rel=1e-9)
    assert res.worst_theta == pytest.approx(0.1)
    assert res.worst_permutation == (0, 1, 2)


def test_q_bounded_by_zero_rotation_branch():
    geo = desk_geometry()
    tiny = np.array([[0.0, 0.0], [0.01, 0.0], [0.0, 0.01]])
    res = evaluate_q(tiny, geo)
    assert res.q <= 3 * geo.r_res ** 2 + 1e-12


def test_coincident_landmarks_give_zero():
    res = evaluate_q(np.zeros((3, 2)), desk_geometry())
    assert res.q == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("phase", [0.0, 0.3, 1.1])
def test_equilateral_is_fully_confounded(phase):
    res = evaluate_q(equilateral(3.0, (1.0, -2.0), phase), desk_geometry())
    assert res.q <= 1e-9
    assert res.worst_theta is not None


def test_q_is_rigid_motion_invariant_about_f_a_center(rng):
    geo = desk_geometry()
    pts = rng.uniform(-3, 3, size=(3, 2))
    q0 = evaluate_q(pts, geo).q
    # rotations about C_a map the whole problem onto itself
    q1 = evaluate_q(rotate(0.9, pts), geo).q
    assert q1 == pytest.approx(q0, rel=1e-9, abs=1e-12)


def test_q_is_label_invariant(rng):
    geo = desk_geometry()
    pts = rng.uniform(-3, 3, size=(3, 2))
    assert evaluate_q(pts[[2, 0, 1]], geo).q == pytest.approx(evaluate_q(pts, geo).q, rel=1e-12)


def test_grid_refinement_is_monotone(rng):
    geo = desk_geometry()
    pts = rng.uniform([-4, -9.5], [4, 9.5], size=(3, 2))
    qs = [evaluate_q(pts, geo, GridSpec(n)).q for n in (90, 180, 360, 720)]
    assert all(b <= a + 1e-12 for a, b in zip(qs, qs[1:]))


def test_theta_grid_nested_and_contains_beta():
    g1 = theta_grid(GridSpec(180), 0.1)
    g2 = theta_grid(GridSpec(360), 0.1)
    assert np.all(np.isin(g1, g2))
    assert 0.1 in g1 and (2 * math.pi - 0.1) in g1
    assert np.all((g1 > 0) & (g1 < 2 * math.pi))
    fine = g1[g1 < 0.1]
    assert np.allclose(np.diff(fine), 2 * math.pi / (180 * SLIVER_DENSITY))


def test_position_gap_sliver_and_far():
    geo = SMALL
    th = np.array([0.05, math.pi])
    out = position_gap_sq(th, 0.0, geo)
    # sliver: r_res - 2 sin(|theta|/2) R_a, squared
    assert out[0] == pytest.approx((1.0 - 2 * math.sin(0.025) * 3.0) ** 2)
    assert out[1] == 0.0
    far = position_gap_sq(np.array([math.pi]), 20.0, geo)
    assert far[0] == pytest.approx((40.0 - 13.0) ** 2)


def test_position_gap_nan_when_outer_too_tight():
    geo = GeometryConfig.centered(r_a=3.0, r_outer=3.5, half_width=1, half_height=1,
                                  r_res=1.0, beta_res=0.1, r_sense=8.0)
    assert np.isnan(position_gap_sq(np.array([0.05]), 0.0, geo)[0])


def test_q_profile_shapes():
    thetas, values, arg, perms = q_profile(TRIANGLE, SMALL, GridSpec(64))
    assert thetas.shape == values.shape == arg.shape
    assert perms.shape == (6, 3)
    assert np.all(values[~np.isnan(values)] >= 0)


def test_factorial_budget():
    with pytest.raises(FactorialBudgetError, match="factorial budget exceeded"):
        evaluate_q(np.zeros((9, 2)), desk_geometry())


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(4)
    with pytest.raises(ValueError):
        GridSpec(10.5)


def test_warns_outside_f_g():
    with pytest.warns(RuntimeWarning, match="outside f_g"):
        evaluate_q(np.array([[0, 0], [1, 0], [100, 0]]), desk_geometry())


def test_q_is_translation_invariant(rng):
    pts = rng.uniform([-4, -9.5], [4, 9.5], size=(3, 2))
    shift = np.array([123.0, -45.5])
    moved = GeometryConfig.centered(shift, r_a=15.0, r_outer=50.0, half_width=4.0, half_height=9.5,
                                    r_res=1.0, beta_res=math.radians(5.0), r_sense=30.0)
    assert evaluate_q(pts + shift, moved).q == pytest.approx(evaluate_q(pts, desk_geometry()).q, abs=1e-9)
