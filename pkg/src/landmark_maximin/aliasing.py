"""Perceptual-aliasing constructions for three unlabelled landmarks.

With range-only or bearing-only readings, three indistinguishable
landmarks do not pin down the observer: there are distinct positions P, Q
whose unlabelled reading sets coincide. These helpers build such pairs and
check them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import least_squares

from .geometry import TWO_PI, as_vec2, rotate

Kind = Literal["range", "bearing"]
MIN_SEPARATION = 1e-6


class CollinearLandmarksError(ValueError):
    pass


class AliasSearchError(RuntimeError):
    pass


@dataclass(frozen=True)
class AliasPair:
    p: np.ndarray
    q: np.ndarray
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "p", as_vec2(self.p))
        object.__setattr__(self, "q", as_vec2(self.q))
        if self.kind not in ("range", "bearing"):
            raise ValueError(f"unknown alias kind {self.kind!r}")
        if math.hypot(*(self.p - self.q)) < MIN_SEPARATION:
            raise ValueError("alias pair positions must be distinct")

    __hash__ = None


def _triangle(a, b, c):
    a, b, c = as_vec2(a), as_vec2(b), as_vec2(c)
    scale = max(math.hypot(*(b - a)), math.hypot(*(c - a)), math.hypot(*(c - b)))
    area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if scale == 0 or abs(area2) <= 1e-12 * scale ** 2:
        raise CollinearLandmarksError("landmarks are collinear; construction undefined")
    return a, b, c


def range_alias(a: ArrayLike, b: ArrayLike, c: ArrayLike, s: float) -> AliasPair:
    """Two positions with equal unlabelled distance sets to ``a, b, c``.

    P and Q sit at distance ``s`` either side of the midpoint of AB along the
    direction perpendicular to the median from C. APBQ is then a
    parallelogram (so |PA| = |QB| and |PB| = |QA|) and C lies on the
    perpendicular bisector of PQ (so |PC| = |QC|).
    """
    if not (math.isfinite(s) and s > 0):
        raise ValueError("s must be positive")
    a, b, c = _triangle(a, b, c)
    mid = 0.5 * (a + b)
    median = c - mid
    u = np.array([median[1], -median[0]]) / math.hypot(*median)
    return AliasPair(mid + s * u, mid - s * u, "range")


def differential_bearings(x: ArrayLike, landmarks: ArrayLike) -> np.ndarray:
    """Counterclockwise gaps between consecutive landmark directions seen from ``x``.

    The gaps are in ccw order starting from the smallest absolute bearing and
    sum to ``2*pi``; they do not depend on the observer's yaw.
    """
    d = np.asarray(landmarks, dtype=float) - as_vec2(x)
    ang = np.sort(np.mod(np.arctan2(d[:, 1], d[:, 0]), TWO_PI))
    return np.diff(np.append(ang, ang[0] + TWO_PI))


def bearing_mismatch(p: ArrayLike, q: ArrayLike, landmarks: ArrayLike) -> float:
    """Smallest max-abs gap difference over cyclic shifts."""
    gp = differential_bearings(p, landmarks)
    gq = differential_bearings(q, landmarks)
    return min(float(np.max(np.abs(gp - np.roll(gq, k)))) for k in range(gp.size))


def verify_alias(kind: Kind, landmarks: ArrayLike, pair: AliasPair, tol: float | None = None) -> bool:
    """Check that ``pair.p`` and ``pair.q`` see the same unlabelled readings."""
    lm = np.asarray(landmarks, dtype=float).reshape(-1, 2)
    if kind == "range":
        tol = 1e-9 if tol is None else tol
        dp = np.sort(np.hypot(*(lm - pair.p).T))
        dq = np.sort(np.hypot(*(lm - pair.q).T))
        return bool(np.max(np.abs(dp - dq)) <= tol)
    if kind == "bearing":
        tol = 1e-6 if tol is None else tol
        return bearing_mismatch(pair.p, pair.q, lm) <= tol
    raise ValueError(f"unknown alias kind {kind!r}")


def _inscribed_circle(u, v, alpha):
    """Circle of points X where the directed angle from XU to XV is alpha (mod pi).

    Returned as ``(D, E, F)`` with ``x^2 + y^2 + D x + E y + F = 0``.
    """
    w = complex(math.cos(alpha), -math.sin(alpha))
    uc, vc = complex(*u), complex(*v)
    # Im[w (V - X) conj(U - X)] = 0, expanded in x and y
    p = w * vc
    qv = w * uc.conjugate()
    s = w.imag
    const = (w * vc * uc.conjugate()).imag
    return (-(p.imag + qv.imag) / s, (p.real - qv.real) / s, const / s)


def _second_intersection(c1, c2, shared):
    """Other intersection of two circles known to meet at ``shared``."""
    d1, e1, _ = c1
    d2, e2, _ = c2
    # radical line: (d1-d2) x + (e1-e2) y + (f1-f2) = 0, through `shared`
    n = np.array([d1 - d2, e1 - e2])
    if np.hypot(*n) == 0:
        return None
    direction = np.array([-n[1], n[0]])
    # X = shared + t * direction; circle 1: |X|^2 + D x + E y + F = 0, t=0 is a root
    t = -(2 * shared @ direction + d1 * direction[0] + e1 * direction[1]) / (direction @ direction)
    return shared + t * direction


def _construct_from(p, lm):
    """Alias candidates for a given P via arc intersections.

    P's gaps (g0, g1, g2) in ccw landmark order (L0, L1, L2). For each other
    labelling (K0, K1, K2) we ask for Q with directed angles g0 from K0 to K1
    and g1 from K1 to K2, i.e. Q on two inscribed-angle arcs through K1.
    """
    d = lm - p
    order = np.argsort(np.mod(np.arctan2(d[:, 1], d[:, 0]), TWO_PI))
    gaps = differential_bearings(p, lm)
    base = tuple(int(i) for i in order)
    out = []
    for k in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        if k in (base, base[1:] + base[:1], base[2:] + base[:2]):
            continue
        k0, k1, k2 = (lm[i] for i in k)
        c1 = _inscribed_circle(k0, k1, gaps[0])
        c2 = _inscribed_circle(k1, k2, gaps[1])
        q = _second_intersection(c1, c2, k1)
        if q is not None and np.all(np.isfinite(q)):
            out.append(q)
    return out


def _far_enough(x, lm, p=None, scale=1.0):
    sep = 1e-3 * scale
    if np.min(np.hypot(*(lm - x).T)) < sep:
        return False
    return p is None or math.hypot(*(x - p)) >= sep


def bearing_alias(a: ArrayLike, b: ArrayLike, c: ArrayLike, *, seed: int = 0,
                  n_tries: int = 200, tol: float = 1e-9) -> AliasPair:
    """Two positions with equal unlabelled oriented differential bearings.

    Candidate P positions are drawn around the triangle; for each, Q is the
    second intersection of two inscribed-angle circles (fixed directed angle
    subtended by a landmark pair), one per relabelling of P's gap sequence.
    If no candidate verifies within ``tol``, a seeded least-squares search
    over (P, Q) is used instead.
    """
    a, b, c = _triangle(a, b, c)
    lm = np.stack([a, b, c])
    centroid = lm.mean(axis=0)
    scale = float(np.max(np.hypot(*(lm - centroid).T)))
    rng = np.random.default_rng(seed)

    for _ in range(n_tries):
        p = centroid + rng.uniform(-2.0, 2.0, size=2) * scale
        if not _far_enough(p, lm, scale=scale):
            continue
        for q in _construct_from(p, lm):
            if not _far_enough(q, lm, p, scale) or np.max(np.abs(q - centroid)) > 1e3 * scale:
                continue
            if bearing_mismatch(p, q, lm) <= tol:
                return AliasPair(p, q, "bearing")

    return _bearing_alias_search(lm, rng, scale, tol)


def _bearing_alias_search(lm, rng, scale, tol, budget=200):
    def residual(x):
        p, q = x[:2], x[2:]
        gp = differential_bearings(p, lm)
        gq = differential_bearings(q, lm)
        return min((gp - np.roll(gq, k) for k in range(1, 3)), key=lambda r: float(r @ r))

    centroid = lm.mean(axis=0)
    for _ in range(budget):
        x0 = np.concatenate([centroid + rng.normal(size=2) * scale,
                             centroid + rng.normal(size=2) * scale])
        sol = least_squares(residual, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        p, q = sol.x[:2], sol.x[2:]
        if _far_enough(p, lm, scale=scale) and _far_enough(q, lm, p, scale) \
                and bearing_mismatch(p, q, lm) <= tol:
            return AliasPair(p, q, "bearing")
    raise AliasSearchError("no alias found at resolution")


def rotational_alias(landmarks: ArrayLike, p: ArrayLike, angle: float) -> AliasPair:
    """Pair (P, rotation of P about the landmark centroid by ``angle``).

    An exact alias whenever that rotation maps the landmark set to itself.
    """
    lm = np.asarray(landmarks, dtype=float)
    centroid = lm.mean(axis=0)
    p = as_vec2(p)
    return AliasPair(p, centroid + rotate(angle, p - centroid), "bearing")


__all__ = [
    "AliasPair", "AliasSearchError", "CollinearLandmarksError", "bearing_alias",
    "bearing_mismatch", "differential_bearings", "range_alias", "rotational_alias",
    "verify_alias",
]
