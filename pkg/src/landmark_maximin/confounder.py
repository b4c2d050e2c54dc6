"""Placement quality Q: the smallest squared gap between the unlabelled
measurement sets seen from two well-separated observer poses.

The relative yaw between the two hypothetical poses is gridded; for each
grid angle the best permutation is found by exhaustive matching and the
best pair of positions has a closed form, so no inner numerical
optimization is needed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .geometry import (
    TWO_PI,
    GeometryConfig,
    all_permutations,
    as_points,
    contains,
    wrap_angle,
)

MAX_LANDMARKS = 8
# angles below beta_res are sampled this many times denser than the base grid
SLIVER_DENSITY = 16
# cap on (angles x permutations) entries materialized at once
_CHUNK_ENTRIES = 2_000_000


class FactorialBudgetError(ValueError):
    """Exhaustive permutation search requested for too many landmarks."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``n_theta`` relative-yaw angles over the circle."""

    n_theta: int = 720

    def __post_init__(self):
        if int(self.n_theta) != self.n_theta or self.n_theta < 8:
            raise ValueError(f"n_theta must be an integer >= 8, got {self.n_theta}")
        object.__setattr__(self, "n_theta", int(self.n_theta))


@dataclass(frozen=True)
class ConfounderResult:
    """Value of Q with the witnesses that attain it.

    ``worst_theta`` is ``None`` when the minimum comes from the
    zero-relative-rotation branch (value ``M * r_res**2``).
    """

    q: float
    worst_theta: Optional[float]
    worst_permutation: tuple


def _check_budget(m: int):
    if m > MAX_LANDMARKS:
        raise FactorialBudgetError(
            f"factorial budget exceeded: exhaustive matching over {m}! permutations "
            f"(limit is M <= {MAX_LANDMARKS})")


def theta_grid(grid: GridSpec, beta_res: float) -> NDArray[np.float64]:
    """Nonzero relative-yaw angles evaluated by :func:`evaluate_q`.

    The uniform grid ``2*pi*k/n_theta`` (k = 1..n-1), a ``SLIVER_DENSITY``
    times finer grid on angles within ``beta_res`` of zero (where the
    position term varies fastest), and the two angles ``+-beta_res`` where
    the angular-separation constraint switches off. Doubling ``n_theta``
    yields a superset, so refinement can only lower Q.
    """
    n_fine = grid.n_theta * SLIVER_DENSITY
    k_max = int(np.ceil(beta_res / TWO_PI * n_fine))
    k = np.arange(1, k_max + 1)
    fine = TWO_PI * k / n_fine
    fine = fine[fine < beta_res]
    base = TWO_PI * np.arange(1, grid.n_theta) / grid.n_theta
    thetas = np.concatenate([base, fine, TWO_PI - fine, [beta_res, TWO_PI - beta_res]])
    return np.unique(thetas)


def _pair_tables(pts: NDArray[np.float64]):
    """Per-permutation sums of dot and cross products.

    ``z_i^T R(theta) z_j = cos(theta) * dot[i, j] + sin(theta) * cross[i, j]``,
    so every permutation's matching score is a combination of two numbers.
    """
    m = pts.shape[0]
    dot = pts @ pts.T
    cross = np.outer(pts[:, 1], pts[:, 0]) - np.outer(pts[:, 0], pts[:, 1])
    perms = all_permutations(m)
    rows = np.arange(m)
    return perms, dot[rows, perms].sum(axis=1), cross[rows, perms].sum(axis=1)


def _best_matching(thetas, perm_dot, perm_cross):
    """Max over permutations of sum_i z_i^T R z_sigma(i), for each angle.

    Returns ``(values, argmax_index)``; ``argmax`` keeps the first maximizer,
    which is the lexicographically smallest permutation.
    """
    thetas = np.atleast_1d(thetas)
    best = np.empty(thetas.shape[0])
    arg = np.empty(thetas.shape[0], dtype=np.intp)
    step = max(1, _CHUNK_ENTRIES // perm_dot.shape[0])
    for lo in range(0, thetas.shape[0], step):
        th = thetas[lo:lo + step]
        scores = np.outer(np.cos(th), perm_dot) + np.outer(np.sin(th), perm_cross)
        idx = np.argmax(scores, axis=1)
        arg[lo:lo + step] = idx
        best[lo:lo + step] = scores[np.arange(th.shape[0]), idx]
    return best, arg


def match_score(c: ArrayLike, theta: float) -> tuple[float, tuple]:
    """Twice the maximum-weight matching score at relative yaw ``theta``.

    Returns ``(2 * max_sigma sum_i z_i^T R(theta) z_sigma(i), sigma)`` where
    ties go to the lexicographically smallest ``sigma``.
    """
    pts = as_points(c)
    _check_budget(pts.shape[0])
    perms, perm_dot, perm_cross = _pair_tables(pts)
    best, arg = _best_matching(np.array([float(theta)]), perm_dot, perm_cross)
    return 2.0 * float(best[0]), tuple(int(i) for i in perms[arg[0]])


def position_gap_sq(thetas, offset_norm: float, geo: GeometryConfig) -> NDArray[np.float64]:
    """Per-angle minimum of ``||R(t1 - zbar) - (t2 - zbar)||^2``.

    ``offset_norm`` is ``||C_a - zbar||``. For angles at least ``beta_res``
    from zero this is the squared distance between the rotated copy of
    ``F_a - zbar`` and ``F_outer - zbar``. Below ``beta_res`` the two
    positions must also be ``r_res`` apart; the cost then depends only on
    how far the rotation can carry a point of ``F_a``, i.e. on the largest
    ``||t1 - zbar||``. Those angles are returned as ``nan`` when ``F_outer``
    is too tight for the closed form to hold.
    """
    thetas = np.asarray(thetas, dtype=float)
    chord = 2.0 * np.abs(np.sin(wrap_angle(thetas) / 2.0))
    r_a, r_outer = geo.f_a.radius, geo.f_outer.radius
    # distance between disc centers after rotating F_a about zbar
    gap = np.maximum(0.0, chord * offset_norm - r_a - r_outer)
    out = gap ** 2

    sliver = np.abs(wrap_angle(thetas)) < geo.beta_res
    if np.any(sliver):
        reach = offset_norm + r_a
        enclosed = r_outer >= r_a + max(geo.r_res, 2.0 * math.sin(geo.beta_res / 2.0) * reach)
        if enclosed:
            short = np.maximum(0.0, geo.r_res - chord[sliver] * reach)
            out[sliver] = short ** 2
        else:
            out[sliver] = np.nan
    return out


def q_profile(c: ArrayLike, geo: GeometryConfig, grid: GridSpec = GridSpec()):
    """Per-angle confounding values before the min-reduction.

    Returns ``(thetas, values, perm_index, perms)``; ``values`` is ``nan``
    at angles that are not evaluated.
    """
    pts = as_points(c)
    m = pts.shape[0]
    _check_budget(m)
    # the formulas are origin-independent; centering on C_a limits cancellation
    pts = pts - geo.center
    zbar = pts.mean(axis=0)
    zbar_sq = float(zbar @ zbar)
    v_aux = 2.0 * float(np.sum(pts * pts)) - 2.0 * m * zbar_sq

    thetas = theta_grid(grid, geo.beta_res)
    perms, perm_dot, perm_cross = _pair_tables(pts)
    best, arg = _best_matching(thetas, perm_dot, perm_cross)
    rho_match = 2.0 * best
    rho_rot = m * position_gap_sq(thetas, math.sqrt(zbar_sq), geo)
    values = v_aux + 2.0 * m * zbar_sq * np.cos(thetas) - rho_match + rho_rot
    # Q is a squared norm; negatives are cancellation noise
    values = np.maximum(values, 0.0)
    return thetas, values, arg, perms


def evaluate_q(c: ArrayLike, geo: GeometryConfig, grid: GridSpec = GridSpec()) -> ConfounderResult:
    """Adversarial pose confounder: value of Q for landmark positions ``c``."""
    pts = as_points(c)
    if not all(contains(geo.f_g, p) for p in pts):
        warnings.warn("constellation has points outside f_g", RuntimeWarning, stacklevel=2)
    m = pts.shape[0]
    q = m * geo.r_res ** 2
    witness_theta, witness_perm = None, tuple(range(m))

    thetas, values, arg, perms = q_profile(pts, geo, grid)
    finite = np.where(np.isnan(values), np.inf, values)
    k = int(np.argmin(finite))
    if finite[k] < q:
        q = float(finite[k])
        witness_theta = float(thetas[k])
        witness_perm = tuple(int(i) for i in perms[arg[k]])
    return ConfounderResult(q=q, worst_theta=witness_theta, worst_permutation=witness_perm)
