"""How badly can a constellation be confused?

Q is the smallest squared mismatch between what an observer would read at
two well-separated poses, once labels are thrown away. A symmetric
triangle scores zero because rotating by 120 degrees reproduces the same
unlabelled readings; a lopsided one scores higher.
"""

import math

import numpy as np

from landmark_maximin import evaluate_q
from landmark_maximin.oracle import brute_force_q

from _desk import DESK

ang = 2 * math.pi * np.arange(3) / 3
shapes = {
    "equilateral": 4.0 * np.stack([np.cos(ang), np.sin(ang)], axis=-1),
    "isosceles": np.array([[-4.0, -9.5], [4.0, -9.5], [0.0, 9.5]]),
    "scalene": np.array([[-4.0, 0.0], [4.0, 9.5], [0.0, -9.5]]),
}

for name, pts in shapes.items():
    res = evaluate_q(pts, DESK)
    worst = "none" if res.worst_theta is None else f"{math.degrees(res.worst_theta):7.2f} deg"
    print(f"{name:12s} Q = {res.q:.4f} m^2   worst relative yaw {worst}"
          f"   matching {res.worst_permutation}")

# the brute-force reference samples concrete pose pairs and should agree
pts = shapes["scalene"]
print(f"\nscalene: analytic {evaluate_q(pts, DESK).q:.5f}, brute force {brute_force_q(pts, DESK):.5f}")
