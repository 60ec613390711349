"""Bi-time flows of the central-force system and the monodromy of its leaves.

The Hamiltonian P^2/2 - 1/(8 Q^2) on the punctured complex line has the
closed-form trajectories Q(z) = sqrt(Q0^2 + 2 Q0 P0 z + 2 E0 z^2), so every
numerical flow below can be checked against a square root with a tracked
branch.  Starting from (Q, P) = (1, 1/2) the energy is exactly zero and
Q(z) = sqrt(z + 1): one branch point at z = -1 controls everything.
"""

import numpy as np

from phhs import models
from phhs.flows import FlowConfig, circle_path, continue_along_path, flow, flow_word
from phhs.hamiltonian import assemble_phhs
from phhs.util import to_complex

cfg = FlowConfig(dt=1e-3)
model = models.build_central_problem()
fields = assemble_phhs(model)
x0 = np.array([1.0, 0.5, 0.0, 0.0])
gamma = model.closed_form(x0)

print("== real-axis flow ==")
end = flow(fields.X, x0, 3.0, cfg)
print("flow t=3      :", to_complex(end))
print("closed form   :", gamma(3.0), "(sqrt(4) = 2, P = 1/4)")

print()
print("== flow words: the two sweep orders land on opposite sheets ==")
w1 = to_complex(flow_word(fields, x0, [(0.0, -2.0), (-2.0, 1.0)], cfg))
w2 = to_complex(flow_word(fields, x0, [(0.0, 1.0), (-2.0, -2.0)], cfg))
print("word [(0,-2),(-2,1)] :", w1)
print("word [(0,1),(-2,-2)] :", w2)
print("sum (should vanish)  :", np.max(np.abs(w1 + w2)))
print("modulus of Q         :", abs(w1[0]), "= 2^(1/4) =", 2 ** 0.25)
print("phase of Q / pi      :", np.angle(w1[0]) / np.pi, "(5/8)")

print()
print("== monodromy around the branch point z = -1 ==")
once = continue_along_path(fields, x0, circle_path(-1.0, 1.0, 0.0, turns=1), cfg)
twice = continue_along_path(fields, x0, circle_path(-1.0, 1.0, 0.0, turns=2), cfg)
print("one loop  -> -x0 defect :", np.max(np.abs(once + x0)))
print("two loops ->  x0 defect :", np.max(np.abs(twice - x0)))
print("the leaf is a double cover of the maximal trajectories")
