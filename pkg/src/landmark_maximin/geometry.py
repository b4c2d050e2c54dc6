"""Planar geometric primitives shared by the rest of the package.

Points are plain ``numpy`` arrays of shape ``(2,)``; collections of points
are ``(N, 2)`` arrays. Angles are radians throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

TWO_PI = 2.0 * math.pi


class InfeasibleGeometryError(ValueError):
    """Raised when a region configuration violates its invariants."""


def as_vec2(v: ArrayLike) -> NDArray[np.float64]:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (2,):
        raise ValueError(f"expected a 2-vector, got shape {np.shape(v)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector components must be finite")
    return arr


def as_points(points: ArrayLike) -> NDArray[np.float64]:
    """Coerce to a finite ``(N, 2)`` float array with N >= 1."""
    if isinstance(points, Constellation):
        return points.points
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
        raise ValueError(f"expected an (N, 2) array of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("points must be finite")
    return arr


def rotation_matrix(theta: float) -> NDArray[np.float64]:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotate(theta: float, v: ArrayLike) -> NDArray[np.float64]:
    """Rotate ``v`` counterclockwise by ``theta``.

    Works on a single 2-vector or on an ``(N, 2)`` stack of them.
    """
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    v = np.asarray(v, dtype=float)
    c, s = math.cos(theta), math.sin(theta)
    x, y = v[..., 0], v[..., 1]
    return np.stack([c * x - s * y, s * x + c * y], axis=-1)


def wrap_angle(theta):
    """Wrap to ``[-pi, pi)``. Accepts scalars or arrays."""
    wrapped = np.mod(np.asarray(theta, dtype=float) + math.pi, TWO_PI) - math.pi
    # fmod rounding can land exactly on +pi for inputs just below an odd multiple
    wrapped = np.where(wrapped >= math.pi, wrapped - TWO_PI, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def angular_distance(yaw1, yaw2):
    """Geodesic distance on the circle, in ``[0, pi]``."""
    d = np.abs(wrap_angle(np.asarray(yaw1, dtype=float) - np.asarray(yaw2, dtype=float)))
    if np.ndim(d) == 0:
        return float(d)
    return d


@dataclass(frozen=True)
class PlanarPose:
    """Observer pose restricted to the plane: position plus yaw."""

    position: NDArray[np.float64]
    yaw: float

    def __post_init__(self):
        object.__setattr__(self, "position", as_vec2(self.position))
        if not math.isfinite(self.yaw):
            raise ValueError("yaw must be finite")
        object.__setattr__(self, "yaw", wrap_angle(float(self.yaw)))

    def __eq__(self, other):
        if not isinstance(other, PlanarPose):
            return NotImplemented
        return bool(np.array_equal(self.position, other.position)) and self.yaw == other.yaw

    __hash__ = None


@dataclass(frozen=True)
class Disc:
    center: NDArray[np.float64]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec2(self.center))
        if not (math.isfinite(self.radius) and self.radius >= 0):
            raise ValueError(f"disc radius must be finite and >= 0, got {self.radius}")
        object.__setattr__(self, "radius", float(self.radius))

    __hash__ = None


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle given by its center and half extents."""

    center: NDArray[np.float64]
    half_width: float
    half_height: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec2(self.center))
        for name in ("half_width", "half_height"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"rect {name} must be finite and > 0, got {val}")
            object.__setattr__(self, name, float(val))

    @property
    def d_semi(self) -> float:
        return math.hypot(self.half_width, self.half_height)

    @property
    def lower(self) -> NDArray[np.float64]:
        return self.center - np.array([self.half_width, self.half_height])

    @property
    def upper(self) -> NDArray[np.float64]:
        return self.center + np.array([self.half_width, self.half_height])

    def clamp(self, points: ArrayLike) -> NDArray[np.float64]:
        """Project points onto the rectangle (exact for an axis-aligned box)."""
        return np.clip(np.asarray(points, dtype=float), self.lower, self.upper)

    __hash__ = None


Region = Union[Disc, Rect]


def contains(region: Region, p: ArrayLike) -> bool:
    """Closed-set membership test."""
    p = as_vec2(p)
    if isinstance(region, Disc):
        return bool(np.hypot(*(p - region.center)) <= region.radius)
    if isinstance(region, Rect):
        d = np.abs(p - region.center)
        return bool(d[0] <= region.half_width and d[1] <= region.half_height)
    raise TypeError(f"unsupported region type {type(region).__name__}")


def disc_set_distance(a: Disc, b: Disc) -> float:
    """Euclidean distance between two closed discs viewed as point sets."""
    gap = math.hypot(*(a.center - b.center)) - (a.radius + b.radius)
    return max(0.0, gap)


@dataclass(frozen=True)
class GeometryConfig:
    """Operating regions and resolution thresholds.

    ``f_a`` is where the observer must localize, ``f_outer`` encloses its
    whole operating space and ``f_g`` is where landmarks may be placed. All
    three share one center. Construction fails with
    :class:`InfeasibleGeometryError` if any landmark in ``f_g`` could be out
    of sensing range from some point of ``f_a``.
    """

    f_a: Disc
    f_outer: Disc
    f_g: Rect
    r_res: float
    beta_res: float
    r_sense: float

    def __post_init__(self):
        if not (np.array_equal(self.f_a.center, self.f_outer.center)
                and np.array_equal(self.f_a.center, self.f_g.center)):
            raise InfeasibleGeometryError("f_a, f_outer and f_g must share one center")
        if self.f_a.radius > self.f_outer.radius:
            raise InfeasibleGeometryError(
                f"f_a radius {self.f_a.radius} exceeds f_outer radius {self.f_outer.radius}")
        if not (math.isfinite(self.r_res) and self.r_res > 0):
            raise InfeasibleGeometryError(f"r_res must be > 0, got {self.r_res}")
        if not (0 < self.beta_res < math.pi):
            raise InfeasibleGeometryError(f"beta_res must lie in (0, pi), got {self.beta_res}")
        if not (math.isfinite(self.r_sense) and self.r_sense > 0):
            raise InfeasibleGeometryError(f"r_sense must be > 0, got {self.r_sense}")
        if self.f_a.radius + self.f_g.d_semi > self.r_sense:
            raise InfeasibleGeometryError(
                "feasibility constraint R_a + d_semi <= R_sense violated: "
                f"{self.f_a.radius:g} + {self.f_g.d_semi:g} > {self.r_sense:g}")

    @property
    def center(self) -> NDArray[np.float64]:
        return self.f_a.center

    @classmethod
    def centered(cls, center=(0.0, 0.0), *, r_a, r_outer, half_width, half_height,
                 r_res, beta_res, r_sense) -> "GeometryConfig":
        center = as_vec2(center)
        return cls(
            f_a=Disc(center, r_a),
            f_outer=Disc(center, r_outer),
            f_g=Rect(center, half_width, half_height),
            r_res=r_res,
            beta_res=beta_res,
            r_sense=r_sense,
        )

    __hash__ = None


@dataclass(frozen=True)
class Constellation:
    """Ordered landmark positions, stored as an ``(M, 2)`` array."""

    points: NDArray[np.float64] = field(repr=False)

    def __post_init__(self):
        arr = as_points(np.asarray(self.points, dtype=float)).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def centroid(self) -> NDArray[np.float64]:
        return self.points.mean(axis=0)

    def __len__(self):
        return self.m

    def __repr__(self):
        return f"Constellation({self.points.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, Constellation):
            return NotImplemented
        return bool(np.array_equal(self.points, other.points))

    __hash__ = None


@lru_cache(maxsize=None)
def all_permutations(m: int) -> NDArray[np.intp]:
    """Every permutation of ``range(m)`` in lexicographic order, as rows."""
    arr = np.array(list(itertools.permutations(range(m))), dtype=np.intp).reshape(-1, m)
    arr.setflags(write=False)
    return arr


def is_permutation(mapping) -> bool:
    mapping = list(mapping)
    return sorted(mapping) == list(range(len(mapping)))
