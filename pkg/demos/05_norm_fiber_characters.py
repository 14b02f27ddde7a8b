"""Characters of pi_{H_0} on the norm fibers: +1 on even fibers, -1 on odd ones.

Run: python demos/05_norm_fiber_characters.py
"""

import numpy as np

from grssd import cosets as cs
from grssd.gf import build_field

F = build_field(19)
l, s = 18, 0
H0 = set(cs.materialize(F, cs.h_coset(F, l, s, 0)).tolist())
for i in range(6):
    fiber = cs.materialize(F, cs.norm_fiber(F, l, i))
    b = np.array([x for x in fiber.tolist() if x not in H0])
    etas = F.eta(cs.union_pi(F, cs.h_coset(F, l, s, 0), b))
    print(f"fiber N_{i}: {b.size} points outside H_0, eta(pi_H0) values {sorted(set(etas.tolist()))}")
