import math

import numpy as np
import pytest

from landmark_maximin.geometry import GeometryConfig
from landmark_maximin.positioner import OptimizerOptions, optimize

_REPORT = []


def desk_geometry(r_outer=50.0, beta_deg=5.0):
    """8 m x 19 m placement rectangle inside a 30 m-diameter F_a."""
    return GeometryConfig.centered(
        r_a=15.0, r_outer=r_outer, half_width=4.0, half_height=9.5,
        r_res=1.0, beta_res=math.radians(beta_deg), r_sense=30.0)


@pytest.fixture(scope="session")
def desk():
    return desk_geometry()


@pytest.fixture(scope="session")
def desk_optimized(desk):
    return optimize(desk, 3, OptimizerOptions(rng_seed=0))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def report():
    """Collects one verdict line per acceptance criterion."""
    def add(name, passed, detail=""):
        _REPORT.append(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
        return passed
    return add


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)


def equilateral(radius=1.0, center=(0.0, 0.0), phase=0.0):
    ang = phase + 2 * math.pi * np.arange(3) / 3
    return np.asarray(center) + radius * np.stack([np.cos(ang), np.sin(ang)], axis=-1)


def scalene(rng, half_width=4.0, half_height=9.5, min_gap=0.1, min_side=1.0):
    """Random triangle in the box with pairwise distances differing by >= min_gap."""
    while True:
        pts = rng.uniform([-half_width, -half_height], [half_width, half_height], size=(3, 2))
        d = sorted(np.hypot(*(pts[i] - pts[j])) for i, j in ((0, 1), (0, 2), (1, 2)))
        u, v = pts[1] - pts[0], pts[2] - pts[0]
        area2 = abs(u[0] * v[1] - u[1] * v[0])
        if d[0] >= min_side and d[1] - d[0] >= min_gap and d[2] - d[1] >= min_gap and area2 > 1.0:
            return pts
