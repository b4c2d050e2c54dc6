import numpy as np
import pytest

from landmark_maximin.confounder import FactorialBudgetError, GridSpec, evaluate_q
from landmark_maximin.geometry import Rect, contains
from landmark_maximin.positioner import OptimizerOptions, initialize, optimize

from conftest import desk_geometry

FAST = dict(n_starts=3, max_evals_per_start=150)
COARSE = GridSpec(90)


def test_initialize_inside_box(rng):
    box = Rect((1, -1), 2, 3)
    c = initialize(box, 5, rng)
    assert c.m == 5
    assert all(contains(box, p) for p in c.points)


def test_optimize_improves_and_stays_in_box():
    geo = desk_geometry()
    res = optimize(geo, 3, OptimizerOptions(rng_seed=7, **FAST), COARSE)
    assert all(contains(geo.f_g, p) for p in res.constellation.points)
    assert res.q >= res.initial_q
    assert res.q == pytest.approx(evaluate_q(res.constellation.points, geo, COARSE).q)
    assert 0 <= res.start_index_of_winner < 3
    assert res.evaluations_used <= 3 * 150


def test_optimize_is_deterministic():
    geo = desk_geometry()
    a = optimize(geo, 3, OptimizerOptions(rng_seed=3, **FAST), COARSE)
    b = optimize(geo, 3, OptimizerOptions(rng_seed=3, **FAST), COARSE)
    np.testing.assert_array_equal(a.constellation.points, b.constellation.points)
    assert a.q == b.q


def test_zero_budget_returns_best_initial_sample():
    geo = desk_geometry()
    res = optimize(geo, 3, OptimizerOptions(n_starts=4, max_evals_per_start=0), COARSE)
    assert res.q == pytest.approx(res.initial_q)
    assert res.evaluations_used == 4


def test_optimize_rejects_large_m():
    with pytest.raises(FactorialBudgetError):
        optimize(desk_geometry(), 9)


@pytest.mark.parametrize("kwargs", [
    dict(n_starts=0), dict(max_evals_per_start=-1), dict(step_tolerance=0.0),
    dict(initial_step=1e-4, step_tolerance=1e-3), dict(rng_seed=-1),
])
def test_options_validation(kwargs):
    with pytest.raises(ValueError):
        OptimizerOptions(**kwargs)


def test_desk_optimum_is_well_above_random(desk, desk_optimized, rng):
    rand = [evaluate_q(initialize(desk.f_g, 3, rng).points, desk).q for _ in range(20)]
    assert desk_optimized.q > 2 * np.median(rand)
    assert desk_optimized.q <= 3 * desk.r_res ** 2
