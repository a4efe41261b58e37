"""Spherical functions on SL(2,R) and SL(3,R), and how the Weyl-law main term grows."""
import math

import numpy as np

from satotate.spherical import c_function, spherical_phi, weyl_main_term

g = np.diag([math.e, 1 / math.e])
for s in (0.0, 1.0, 4.0, 16.0):
    v = spherical_phi([s, -s], g)
    print(f"s={s:<5g} phi_(s, -s)(diag(e, 1/e)) = {v.value.real:+.12f}  ({v.nodes} nodes)")

print("c((1/2, -1/2)) =", c_function([0.5, -0.5]))

for n in (2, 3):
    for t in (25, 50, 100):
        mt = weyl_main_term(1.0, t, n)
        print(f"n={n} T={t}: main term {mt.value:.6g}, local exponent {mt.exponent:.4f} (expected {mt.d})")
