"""Metric-induced almost complex structures on the cotangent bundle.

A metric on the base induces J* on the cotangent side through the
horizontal/vertical splitting of its Levi-Civita connection.  The canonical
symplectic pairing against J* is a metric of doubled signature, and J* is
integrable exactly when the base metric is flat: the scan below shows the
curvature norm and the Nijenhuis norm moving together.
"""

import numpy as np

from phhs import connections as conn
from phhs.util import grid_points

pts = grid_points(np.array([1.0, 0.2, 0.4, -0.3]), 0.2, 2)

cases = [
    ("euclidean", conn.euclidean_metric(2)),
    ("flat polar-like diag(1, x1^2)", conn.diagonal_metric([lambda x: 1.0, lambda x: x[0] ** 2])),
    ("curved diag(1, 1 + x1^2)", conn.diagonal_metric([lambda x: 1.0, lambda x: 1.0 + x[0] ** 2])),
]

print(f"{'metric':32s} {'max |R|':>12s} {'max |N_J*|':>12s}")
for name, g in cases:
    rep = conn.flatness_vs_integrability(g, pts)
    print(f"{name:32s} {rep['max_curvature']:12.3e} {rep['max_nijenhuis']:12.3e}")

print()
print("== symplectic pairing signatures ==")
for name, g in (("euclidean", conn.euclidean_metric(2)), ("minkowski", conn.diagonal_metric([1.0, -1.0]))):
    sig, sym = conn.pairing_signature(g, pts[0])
    print(f"{name}: omega_can(., J* .) has signature {sig}, symmetry defect {sym:.1e}")

print()
print("== a holomorphic metric has one Levi-Civita connection for both parts ==")
h = [[lambda z: 1.0, lambda z: 0.0], [lambda z: 0.0, lambda z: np.exp(z[0])]]
out = conn.holo_metric_lc_check(h, grid_points(np.array([0.1, -0.2, 0.3, 0.2]), 0.3, 3))
print("h = dz1^2 + exp(z1) dz2^2:")
print("max |Gamma(h_R) - Gamma(h_I)| =", out["max_christoffel_diff"])
