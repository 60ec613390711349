"""Action functionals over time domains and the trajectory-as-critical-point test.

A sampled trajectory grid should be an approximate critical point of the
parallelogram action with the boundary held fixed; displacing a single
interior node makes the variational gradient jump by orders of magnitude.
On disks the ray-averaged functional annihilates every holomorphic curve,
while the diameter-averaged one reproduces the Hamilton value on constants.
"""

import numpy as np

from phhs import actions as act
from phhs import models
from phhs.flows import FlowConfig, trajectory_grid
from phhs.hamiltonian import assemble_phhs

model = models.build_standard_hhs(1, "(P1^2 + Q1^2)/2")
fields = assemble_phhs(model)
x0 = np.array([0.4, 0.3, 0.1, -0.2])
cfg = FlowConfig(dt=1e-3)

print("== parallelogram action on a trajectory grid ==")
grid = trajectory_grid(fields, x0, 0.0, (0.0, 1.0), (0.0, 1.0), 17, 17, cfg)
curve = act.curve_from_grid(grid)
action = act.ParallelogramAction(fields)
print("action value          :", action.value(curve))
base = act.gradient_max_norm(action.gradient(curve))
print("gradient at trajectory:", base)
curve.values[8, 8, 0] += 0.05
displaced = act.gradient_max_norm(action.gradient(curve))
print("gradient displaced    :", displaced, f"(ratio {displaced / base:.0f})")
curve.values[8, 8, 0] -= 0.05

print()
print("== disk functionals ==")
gamma = act.holomorphic_affine_curve(x0, np.array([0.3 + 0.2j, -0.1 + 0.4j]))
polar = act.sample_polar(gamma, 0.0, 1.0, 64, 256)
print("ray average on a holomorphic curve :", abs(act.disk_action_1(fields, polar)))
signed = act.sample_polar_signed(lambda z: x0, 0.0, 1.0, 65, 128)
h = complex(fields.model.H_R(x0), fields.H_I(x0))
print("diameter average on a constant     :", act.disk_action_2(fields, signed))
print("Hamilton value at the point        :", h)

print()
print("== star domains: constant radius reduces to the disk ==")
star = act.star_action(fields, polar, 1)
print("star(R const) - disk :", abs(star - act.disk_action_1(fields, polar)))
ell = lambda a: 1.0 / np.sqrt(np.cos(a) ** 2 + (np.sin(a) / 2.0) ** 2)  # noqa: E731
star2 = act.star_action(
    fields, act.sample_polar_signed(lambda z: x0, 0.0, ell, 65, 160), 2
)
print("ellipse diameter average on a constant:", star2, "(still the Hamilton value)")
