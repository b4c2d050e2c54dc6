"""Joint data association and planar pose recovery from unlabelled
relative-position readings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from .confounder import MAX_LANDMARKS, FactorialBudgetError, GridSpec, evaluate_q
from .geometry import (
    GeometryConfig,
    PlanarPose,
    all_permutations,
    as_points,
    contains,
    rotate,
    wrap_angle,
)


class IncompleteObservationError(ValueError):
    """Number of readings differs from the number of landmarks."""


class DegenerateRegistrationError(ValueError):
    """Yaw is unobservable because all landmarks coincide."""


@dataclass(frozen=True)
class MeasurementSet:
    """Unordered body-frame relative positions, one per detected landmark."""

    readings: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "readings", as_points(self.readings).copy())

    @classmethod
    def from_range_bearing(cls, ranges, bearings) -> "MeasurementSet":
        r = np.asarray(ranges, dtype=float)
        b = np.asarray(bearings, dtype=float)
        return cls(np.stack([r * np.cos(b), r * np.sin(b)], axis=-1))

    def range_bearing(self):
        x, y = self.readings[:, 0], self.readings[:, 1]
        return np.hypot(x, y), np.arctan2(y, x)

    def __len__(self):
        return self.readings.shape[0]

    __hash__ = None


@dataclass(frozen=True)
class LocalizationResult:
    """Best hypothesis; ``association[k]`` is the landmark behind reading ``k``."""

    pose: PlanarPose
    association: tuple
    residual_sq: float
    accepted: bool


def measure(pose: PlanarPose, c: ArrayLike, noise: Optional[ArrayLike] = None) -> MeasurementSet:
    """Readings ``R(yaw)^T (z_i - t) + noise_i`` in landmark order.

    Landmark order is kept; shuffle the readings to model unlabelled sensing.
    """
    pts = as_points(c)
    readings = rotate(-pose.yaw, pts - pose.position)
    if noise is not None:
        readings = readings + np.asarray(noise, dtype=float).reshape(readings.shape)
    return MeasurementSet(readings)


def _fit_batch(landmarks: np.ndarray, readings: np.ndarray):
    """Closed-form 2D rigid fit for a batch of paired point sets.

    ``landmarks`` and ``readings`` have shape (B, M, 2). Returns
    ``(yaw, t, residual_sq)`` with shapes (B,), (B, 2), (B,).
    """
    zbar = landmarks.mean(axis=1, keepdims=True)
    mbar = readings.mean(axis=1, keepdims=True)
    c = landmarks - zbar
    d = readings - mbar
    dot = np.sum(d * c, axis=(1, 2))
    cross = np.sum(d[..., 0] * c[..., 1] - d[..., 1] * c[..., 0], axis=1)
    yaw = np.arctan2(cross, dot)
    cy, sy = np.cos(yaw)[:, None], np.sin(yaw)[:, None]
    mb = mbar[:, 0, :]
    t = zbar[:, 0, :] - np.stack([cy[:, 0] * mb[:, 0] - sy[:, 0] * mb[:, 1],
                                  sy[:, 0] * mb[:, 0] + cy[:, 0] * mb[:, 1]], axis=-1)
    rel = landmarks - t[:, None, :]
    pred = np.stack([cy * rel[..., 0] + sy * rel[..., 1],
                     -sy * rel[..., 0] + cy * rel[..., 1]], axis=-1)
    resid = np.sum((pred - readings) ** 2, axis=(1, 2))
    return yaw, t, resid


def fit_pose_fixed_assoc(landmarks: ArrayLike, readings: ArrayLike) -> tuple[PlanarPose, float]:
    """Least-squares pose for known landmark/reading pairs.

    Minimizes ``sum_i ||R(yaw)^T (z_i - t) - m_i||^2`` in closed form.
    """
    z = as_points(landmarks)
    mm = as_points(readings)
    if z.shape != mm.shape:
        raise ValueError("landmarks and readings must pair up one to one")
    if z.shape[0] < 2:
        raise DegenerateRegistrationError("degenerate registration: need at least 2 pairs")
    if np.all(np.abs(z - z[0]) == 0):
        raise DegenerateRegistrationError("degenerate registration: all landmarks coincide")
    yaw, t, resid = _fit_batch(z[None], mm[None])
    return PlanarPose(t[0], float(yaw[0])), float(resid[0])


def association_residuals(m: MeasurementSet, c: ArrayLike):
    """Fit every association; returns ``(perms, yaw, t, residual_sq)``.

    Row ``p`` of ``perms`` maps reading ``k`` to landmark ``perms[p, k]``.
    """
    pts = as_points(c)
    readings = m.readings
    if readings.shape[0] != pts.shape[0]:
        raise IncompleteObservationError(
            f"incomplete observation: {readings.shape[0]} readings for {pts.shape[0]} landmarks")
    if pts.shape[0] > MAX_LANDMARKS:
        raise FactorialBudgetError(f"factorial budget exceeded: M={pts.shape[0]}")
    if np.all(np.abs(pts - pts[0]) == 0):
        raise DegenerateRegistrationError("degenerate registration: all landmarks coincide")
    perms = all_permutations(pts.shape[0])
    landmarks = pts[perms]
    obs = np.broadcast_to(readings, landmarks.shape)
    yaw, t, resid = _fit_batch(landmarks, obs)
    return perms, yaw, t, resid


def default_gate(c: ArrayLike, geo: GeometryConfig, grid: GridSpec = GridSpec()) -> float:
    """Residual gate at a quarter of the constellation's Q."""
    return evaluate_q(c, geo, grid).q / 4.0


def localize(m: MeasurementSet, c: ArrayLike, geo: GeometryConfig,
             gate_threshold: Optional[float] = None) -> LocalizationResult:
    """Pick the association and pose with the smallest residual, then gate it.

    The estimate is accepted only if its residual is at most
    ``gate_threshold`` and its position lies in ``F_a``. Without an explicit
    threshold, :func:`default_gate` is used.
    """
    perms, yaw, t, resid = association_residuals(m, c)
    k = int(np.argmin(resid))
    pose = PlanarPose(t[k], float(yaw[k]))
    residual = float(max(resid[k], 0.0))
    if gate_threshold is None:
        gate_threshold = default_gate(c, geo)
    accepted = residual <= gate_threshold and contains(geo.f_a, pose.position)
    return LocalizationResult(pose, tuple(int(i) for i in perms[k]), residual, bool(accepted))


def pose_error(estimate: PlanarPose, truth: PlanarPose) -> tuple[float, float]:
    """Position error norm and signed yaw error (estimate - truth), wrapped."""
    return (float(math.hypot(*(estimate.position - truth.position))),
            wrap_angle(estimate.yaw - truth.yaw))
