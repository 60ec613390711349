"""The integrability dichotomy over the built-in model zoo.

An almost complex structure anticompatible with a closed symplectic form is
integrable exactly when the induced imaginary form is closed.  The scan
below puts the Nijenhuis norm and the exterior-derivative norm side by side
for every built-in family: they vanish together or stay large together.
"""

import numpy as np

from phhs import models
from phhs.hamiltonian import integrability_report, omega_I_from
from phhs.tensors import exterior_derivative_2form, nijenhuis_rank
from phhs.util import grid_points

zoo = [
    ("standard C^2", models.build_standard_hhs(1, "P1"), 0.5),
    ("twist f=h=1 (quaternionic case)", models.build_proper_phhs(f="1", h="1"), 0.5),
    ("twist h=exp(x1)", models.build_proper_phhs(f="1", h="exp(x1)"), 0.5),
    ("rotation phi=0", models.build_rotation_family("0"), 0.5),
    ("rotation phi=x1", models.build_rotation_family("x1"), 0.5),
    ("deformation eps=0", models.build_deformation(0.0, n=1), 1.2),
    ("deformation eps=0.5", models.build_deformation(0.5, n=1), 1.2),
]

print(f"{'model':35s} {'max |N_J|':>12s} {'max |dOmega_I|':>15s}  verdict")
for name, model, half in zoo:
    rep = integrability_report(model, grid_points(np.zeros(4), half, 5))
    print(f"{name:35s} {rep.max_nijenhuis:12.3e} {rep.max_d_omega_I:15.3e}  {rep.classification}")

print()
print("== the twisted example in detail ==")
twist = models.build_proper_phhs(f="1", h="exp(x1)")
omega_I = omega_I_from(twist.omega_R, twist.J)
for x1 in (0.0, 0.5, 1.0):
    comp = exterior_derivative_2form(omega_I, np.array([x1, 0, 0, 0]))[0, 1, 2]
    print(f"(dOmega_I)_(x1 x2 y1) at x1={x1}: {comp:.6f}  (exp(x1) = {np.exp(x1):.6f})")

print()
print("== Nijenhuis rank across the deformation bump ==")
model = models.build_deformation(0.5, n=1)
for x1 in (0.0, 0.3, 0.6, 0.9, 1.1):
    p = np.array([x1, 0.0, 0.0, 0.0])
    print(f"x1={x1:4.1f}: rank {nijenhuis_rank(model.J, p)}")
print("rank 2 wherever the bump gradient is nonzero, 0 elsewhere")
