"""Landmark placement: maximize Q over constellations inside ``F_g``.

Random initialization followed by a derivative-free coordinate pattern
search, restarted from several seeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .confounder import MAX_LANDMARKS, FactorialBudgetError, GridSpec, evaluate_q
from .geometry import Constellation, GeometryConfig, Rect


@dataclass(frozen=True)
class OptimizerOptions:
    n_starts: int = 16
    max_evals_per_start: int = 2000
    initial_step: Optional[float] = None  # None -> d_semi / 4
    step_tolerance: float = 1e-3
    rng_seed: int = 0

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValueError("n_starts must be positive")
        if self.max_evals_per_start < 0:
            raise ValueError("max_evals_per_start must be non-negative")
        if self.step_tolerance <= 0:
            raise ValueError("step_tolerance must be positive")
        if self.initial_step is not None and not (self.step_tolerance < self.initial_step):
            raise ValueError("step_tolerance must be smaller than initial_step")
        if not (0 <= int(self.rng_seed) < 2 ** 64):
            raise ValueError("rng_seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class PlacementResult:
    constellation: Constellation
    q: float
    evaluations_used: int
    start_index_of_winner: int
    initial_q: float  # best Q among the random initial samples


def initialize(f_g: Rect, m: int, rng: np.random.Generator) -> Constellation:
    """``m`` points drawn independently and uniformly over the rectangle."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return Constellation(rng.uniform(f_g.lower, f_g.upper, size=(m, 2)))


def _pattern_search(x0, objective, f_g: Rect, step, tol, budget):
    """Maximize ``objective`` by compass search over all 2M coordinates.

    Each sweep evaluates every +-step neighbour (clamped into ``f_g``),
    moves to the best strict improvement, and halves the step when there is
    none. Returns ``(x, f, evals)``, the first evaluation included.
    """
    x = f_g.clamp(x0)
    if budget <= 0:
        return x, objective(x), 1
    fx = objective(x)
    evals = 1
    n = x.size
    while step >= tol and evals < budget:
        best_x, best_f = None, fx
        for k in range(n):
            for sign in (1.0, -1.0):
                if evals >= budget:
                    break
                cand = x.copy().reshape(-1)
                cand[k] += sign * step
                cand = f_g.clamp(cand.reshape(x.shape))
                if np.array_equal(cand, x):
                    continue
                fc = objective(cand)
                evals += 1
                if fc > best_f:
                    best_x, best_f = cand, fc
        if best_x is None:
            step /= 2.0
        else:
            x, fx = best_x, best_f
    return x, fx, evals


def optimize(geo: GeometryConfig, m: int, opts: OptimizerOptions = OptimizerOptions(),
             grid: GridSpec = GridSpec()) -> PlacementResult:
    """Multi-start search for the constellation with the largest Q.

    Each start gets its own generator spawned from ``opts.rng_seed``, so the
    result does not depend on how starts are scheduled. With a zero
    evaluation budget the best random initial sample is returned.
    """
    if m > MAX_LANDMARKS:
        raise FactorialBudgetError(f"factorial budget exceeded: m={m} > {MAX_LANDMARKS}")
    f_g = geo.f_g
    step0 = opts.initial_step if opts.initial_step is not None else f_g.d_semi / 4.0
    if not opts.step_tolerance < step0:
        raise ValueError("step_tolerance must be smaller than the initial step")

    def objective(x):
        return evaluate_q(x, geo, grid).q

    seeds = np.random.SeedSequence(int(opts.rng_seed)).spawn(opts.n_starts)
    best = None
    best_init_q = -np.inf
    total_evals = 0
    for i, ss in enumerate(seeds):
        x0 = initialize(f_g, m, np.random.default_rng(ss)).points
        q0 = objective(x0)
        best_init_q = max(best_init_q, q0)
        x, fx, evals = _pattern_search(x0, objective, f_g, step0, opts.step_tolerance,
                                       opts.max_evals_per_start)
        total_evals += evals
        if best is None or fx > best[1]:
            best = (x, fx, i)

    x, fx, winner = best
    q = evaluate_q(x, geo, grid).q
    return PlacementResult(Constellation(x), q, total_evals, winner, float(best_init_q))
