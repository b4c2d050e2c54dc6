"""Recover a pose from shuffled, unlabelled relative readings.

Every association is fitted in closed form; the best one is accepted if
its residual is under a quarter of Q and the pose lies in F_a.
"""

import math

import numpy as np

from landmark_maximin import MeasurementSet, PlanarPose, evaluate_q, localize, measure, pose_error

from _desk import DESK

pts = np.array([[-4.0, 0.0], [4.0, 9.5], [0.0, -9.5]])
truth = PlanarPose((6.0, -3.0), math.radians(130.0))
rng = np.random.default_rng(1)

clean = measure(truth, pts).readings
order = np.array([2, 0, 1])  # reading k comes from landmark order[k]
res = localize(MeasurementSet(clean[order]), pts, DESK)
e_xy, e_yaw = pose_error(res.pose, truth)
print(f"noise-free: association {res.association} (truth {tuple(order.tolist())}), "
      f"error {e_xy:.1e} m / {math.degrees(e_yaw):.1e} deg")

q = evaluate_q(pts, DESK).q
for sigma in (0.05, 0.2, 1.0):
    noisy = clean + rng.normal(scale=sigma, size=clean.shape)
    res = localize(MeasurementSet(noisy[order]), pts, DESK)
    e_xy, e_yaw = pose_error(res.pose, truth)
    print(f"sigma {sigma:4.2f} m: residual {res.residual_sq:.4f} vs gate {q / 4:.4f}, "
          f"accepted={res.accepted}, error {e_xy:.3f} m / {math.degrees(e_yaw):.2f} deg")
