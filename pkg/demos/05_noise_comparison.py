"""Optimized versus random placement under landmark position noise.

A reduced run of the full comparison (the CLI ``simulate`` subcommand runs
the full-size version from configs/desk.json).
"""

from landmark_maximin import compare

from _desk import DESK

comp = compare(DESK, 3, sigmas=[0.5, 1.0, 2.0], n_random_baselines=8, n_poses=100, n_trials=4)
print(f"optimized Q {comp.optimized_q:.3f}; random Q median "
      f"{sorted(comp.baseline_q)[len(comp.baseline_q) // 2]:.3f}\n")
print(f"{'kind':15s} {'sigma':>5s} {'xy reduction':>13s} {'yaw reduction':>14s}")
for kind in ("random", "non_stochastic"):
    xy, yaw = comp.reductions(kind, "xy"), comp.reductions(kind, "yaw")
    for sigma in xy:
        print(f"{kind:15s} {sigma:5.1f} {xy[sigma]:12.1f}% {yaw[sigma]:13.1f}%")
