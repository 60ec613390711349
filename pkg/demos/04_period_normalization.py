"""Period normalization for planar systems: chart, measured periods, area law.

For omega = (1 + x^2) dx ^ dy with the quadratic Hamiltonian, the orbit at
radius r has period pi (1 + r^2/2).  Rescaling the energy axis by the chart
psi(s) = s + s^2/4 makes every orbit exactly pi-periodic, and the symplectic
area of the sublevel set {psi(x^2 + y^2) <= E} becomes exactly pi E.
"""

import numpy as np

from phhs.flows import FlowConfig
from phhs.morse import (
    PlanarSystem,
    area_law_check,
    period_function,
    rescaling_chart,
    verify_T_periodic,
)

system = PlanarSystem(v=lambda p: 1.0 + p[0] ** 2, T=np.pi)
cfg = FlowConfig(dt=1e-3)

print("== period function vs the closed form pi (1 + r^2/2) ==")
for r in (0.2, 0.5, 0.8):
    print(f"r={r}: T_hat={period_function(system, r):.10f}  oracle={np.pi * (1 + r * r / 2):.10f}")

print()
print("== rescaling chart vs s + s^2/4 ==")
for s in (0.1, 0.25, 0.5):
    print(f"s={s}: psi={rescaling_chart(system, s):.10f}  oracle={s + s * s / 4:.10f}")

print()
print("== measured orbit periods ==")
for r0 in (0.2, 0.5, 0.8):
    raw = verify_T_periodic(system, r0, cfg, rescale=False)
    fixed = verify_T_periodic(system, r0, cfg)
    print(f"r0={r0}: unrescaled {raw:.6f} (radius dependent), rescaled {fixed:.6f} (= pi)")

print()
print("== area law: area of the sublevel set equals T E ==")
for E in (0.05, 0.1, 0.2):
    area, target, res = area_law_check(system, E)
    print(f"E={E}: area={area:.8f}  T*E={target:.8f}  residual={res:.2e}")
