"""Brute-force reference for Q.

Evaluates ``||H(z; g1) - Pi H(z; g2)||^2`` on concrete pose pairs, sampled
densely, instead of going through the analytic reduction used by
:func:`landmark_maximin.confounder.evaluate_q`. Only meant for validation on
small instances.

The second pose's yaw is pinned to zero: applying one rotation to both
measurement sets leaves the residual unchanged, so only the relative yaw
matters. For a fixed relative yaw, first position and permutation, the
residual is an isotropic quadratic in the second position; its
unconstrained minimizer is used when feasible and otherwise the feasible
boundary is sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .geometry import TWO_PI, GeometryConfig, all_permutations, as_points, wrap_angle

MAX_ORACLE_LANDMARKS = 4


class OracleResolutionError(RuntimeError):
    """Sampling produced no feasible pose pair."""


@dataclass(frozen=True)
class OracleResolution:
    n_theta: int = 360
    n_theta_sliver: int = 100
    n_radial: int = 7
    n_angular: int = 24
    n_boundary: int = 360
    refine_rounds: int = 50
    refine_boundary: int = 3600


def measurement_stack(points, yaw: float, t) -> np.ndarray:
    """Body-frame relative positions ``R(yaw)^T (z_i - t)`` for all landmarks."""
    d = points - np.asarray(t, dtype=float)
    c, s = math.cos(yaw), math.sin(yaw)
    return np.stack([c * d[:, 0] + s * d[:, 1], -s * d[:, 0] + c * d[:, 1]], axis=-1)


def _sample_disc(center, radius, n_radial, n_angular):
    pts = [np.asarray(center, dtype=float)]
    for r in np.linspace(0.0, radius, n_radial)[1:]:
        # denser rings further out keep the arc spacing roughly even
        n = max(6, int(round(n_angular * r / radius)))
        ang = TWO_PI * np.arange(n) / n
        pts.append(center + r * np.stack([np.cos(ang), np.sin(ang)], axis=-1))
    return np.vstack(pts)


class _Problem:
    def __init__(self, pts, geo: GeometryConfig):
        self.pts = pts
        self.m = pts.shape[0]
        self.perms = all_permutations(self.m)
        self.geo = geo
        self.center = geo.center

    def feasible(self, theta, t1, t2, tol=1e-12):
        """Problem constraints on a batch of (theta, t1, t2)."""
        geo = self.geo
        in_outer = np.hypot(*(t2 - self.center).T) <= geo.f_outer.radius * (1 + tol)
        separated_angle = np.abs(wrap_angle(theta)) >= geo.beta_res
        separated_pos = np.hypot(*(t1 - t2).T) >= geo.r_res * (1 - tol)
        return in_outer & (separated_angle | separated_pos)

    def offsets(self, theta, t1):
        """Residual minus the second position, for every permutation.

        ``theta`` and ``t1`` have shape (B,) and (B, 2); the result has shape
        (B, P, M, 2) with ``result[b, p, i] + t2 = h1_i - h2_perm(i)``.
        """
        d = self.pts[None, :, :] - t1[:, None, :]
        c, s = np.cos(theta)[:, None], np.sin(theta)[:, None]
        h1 = np.stack([c * d[..., 0] + s * d[..., 1], -s * d[..., 0] + c * d[..., 1]], axis=-1)
        # h2_j = z_j - t2
        return h1[:, None, :, :] - self.pts[self.perms][None, :, :, :]

    def best_t2(self, theta, t1, n_boundary):
        """Minimum residual over feasible t2 and permutations for each batch row."""
        a = self.offsets(theta, t1)
        bsz, n_perm = a.shape[:2]
        t2_star = -a.mean(axis=2)
        th = np.repeat(theta, n_perm)
        t1r = np.repeat(t1, n_perm, axis=0)
        t2r = t2_star.reshape(-1, 2)
        af = a.reshape(bsz * n_perm, self.m, 2)

        obj = np.sum((af + t2r[:, None, :]) ** 2, axis=(1, 2))
        ok = self.feasible(th, t1r, t2r)
        obj = np.where(ok, obj, np.inf)
        best_t2 = t2r.copy()

        bad = np.flatnonzero(~ok)
        if bad.size:
            ang = TWO_PI * np.arange(n_boundary) / n_boundary
            ring = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
            geo = self.geo
            for lo in range(0, bad.size, 2048):
                idx = bad[lo:lo + 2048]
                t1b, t2b = t1r[idx], t2r[idx]
                # radial push-off from t1, plus both boundary circles
                away = t2b - t1b
                nrm = np.hypot(*away.T)[:, None]
                away = np.where(nrm > 0, away / np.where(nrm > 0, nrm, 1.0), np.array([1.0, 0.0]))
                r_sep = geo.r_res * (1 + 1e-12)
                cand = np.concatenate([
                    (t1b + r_sep * away)[:, None, :],
                    t1b[:, None, :] + r_sep * ring[None, :, :],
                    np.broadcast_to(self.center + geo.f_outer.radius * ring,
                                    (idx.size, n_boundary, 2)),
                ], axis=1)
                n_c = cand.shape[1]
                okc = self.feasible(np.repeat(th[idx], n_c), np.repeat(t1b, n_c, axis=0),
                                    cand.reshape(-1, 2)).reshape(idx.size, n_c)
                vals = np.sum((af[idx][:, None, :, :] + cand[:, :, None, :]) ** 2, axis=(2, 3))
                vals = np.where(okc, vals, np.inf)
                j = np.argmin(vals, axis=1)
                obj[idx] = vals[np.arange(idx.size), j]
                best_t2[idx] = cand[np.arange(idx.size), j]

        obj = obj.reshape(bsz, n_perm)
        k = np.argmin(obj, axis=1)
        rows = np.arange(bsz)
        return obj[rows, k], best_t2.reshape(bsz, n_perm, 2)[rows, k], k


def brute_force_q(c: ArrayLike, geo: GeometryConfig,
                  resolution: OracleResolution = OracleResolution()) -> float:
    """Sampled minimum of the confounding residual, then local refinement.

    Samples relative yaw over ``[0, 2*pi)`` (more densely within
    ``beta_res`` of zero), the first position over ``F_a`` (polar rings
    including the boundary) and all permutations. The best sample inside
    and the best outside the small-angle band are each polished with cyclic
    coordinate descent on ``(t1_x, t1_y, theta)`` using a halving step.
    """
    pts = as_points(c)
    if pts.shape[0] > MAX_ORACLE_LANDMARKS:
        raise ValueError(f"brute_force_q supports at most {MAX_ORACLE_LANDMARKS} landmarks")
    prob = _Problem(pts, geo)
    r_a = geo.f_a.radius

    t1s = _sample_disc(geo.center, r_a, resolution.n_radial, resolution.n_angular)
    band = geo.beta_res * np.linspace(-1.0, 1.0, 2 * resolution.n_theta_sliver + 1)
    thetas = np.concatenate([TWO_PI * np.arange(resolution.n_theta) / resolution.n_theta, band])

    # best sample per region: 0 = small-angle band, 1 = elsewhere
    best = [(np.inf, None, None), (np.inf, None, None)]
    per_chunk = max(1, 200_000 // (t1s.shape[0] * prob.perms.shape[0]))
    for lo in range(0, thetas.size, per_chunk):
        th = np.repeat(thetas[lo:lo + per_chunk], t1s.shape[0])
        t1 = np.tile(t1s, (min(per_chunk, thetas.size - lo), 1))
        vals, _, _ = prob.best_t2(th, t1, resolution.n_boundary)
        far = np.abs(wrap_angle(th)) >= geo.beta_res
        for region, mask in enumerate((~far, far)):
            if not np.any(mask):
                continue
            k = int(np.flatnonzero(mask)[np.argmin(vals[mask])])
            if vals[k] < best[region][0]:
                best[region] = (float(vals[k]), float(th[k]), t1[k].copy())
    if not any(np.isfinite(b[0]) for b in best):
        raise OracleResolutionError("no feasible pose pair at this sampling resolution")

    def project(t1):
        # radial projection keeps boundary minimizers reachable by axis steps
        d = t1 - geo.center
        n = float(np.hypot(*d))
        return t1 if n <= r_a else geo.center + d * (r_a / n)

    def objective(theta, t1):
        v, _, _ = prob.best_t2(np.array([theta]), t1[None, :], resolution.refine_boundary)
        return float(v[0])

    def refine(value, theta, t1):
        value = min(value, objective(theta, t1))
        step_pos = r_a / max(1, resolution.n_radial - 1)
        step_theta = TWO_PI / resolution.n_theta
        for _ in range(resolution.refine_rounds):
            for axis in range(3):
                for sign in (1.0, -1.0):
                    cand_theta, cand_t1 = theta, t1.copy()
                    if axis == 2:
                        cand_theta = theta + sign * step_theta
                    else:
                        cand_t1[axis] += sign * step_pos
                        cand_t1 = project(cand_t1)
                    v = objective(cand_theta, cand_t1)
                    if v < value:
                        value, theta, t1 = v, cand_theta, cand_t1
            step_pos /= 2.0
            step_theta /= 2.0
        return value

    return min(refine(*b) for b in best if np.isfinite(b[0]))
