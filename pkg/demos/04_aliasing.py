"""Three unlabelled landmarks are not enough with a single reading type.

Range-only: two points mirrored about the midpoint of one side see the same
set of distances. Bearing-only: two points on intersecting inscribed-angle
arcs see the same cyclic sequence of angular gaps.
"""

import numpy as np

from landmark_maximin import bearing_alias, range_alias, verify_alias
from landmark_maximin.aliasing import differential_bearings

a, b, c = np.array([0.0, 0.0]), np.array([2.0, 0.0]), np.array([1.0, 2.0])
lm = np.stack([a, b, c])

pair = range_alias(a, b, c, s=0.5)
print("range alias  P", pair.p, " Q", pair.q)
print("  distances from P:", np.round(np.sort(np.linalg.norm(lm - pair.p, axis=1)), 6))
print("  distances from Q:", np.round(np.sort(np.linalg.norm(lm - pair.q, axis=1)), 6))
print("  verified:", verify_alias("range", lm, pair))

pair = bearing_alias(a, b, c, seed=0)
print("\nbearing alias P", np.round(pair.p, 4), " Q", np.round(pair.q, 4))
print("  gaps at P (deg):", np.round(np.degrees(differential_bearings(pair.p, lm)), 4))
print("  gaps at Q (deg):", np.round(np.degrees(differential_bearings(pair.q, lm)), 4))
print("  verified:", verify_alias("bearing", lm, pair))
