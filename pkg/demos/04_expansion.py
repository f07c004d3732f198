"""Expand a deformed harmonic over ordinary spherical harmonics.

For m=1, n_theta=2 the l=3 term dominates and loses weight as b grows; the
weight spreads to l = 1, 5, 7, ...  Odd l - m never appear.
"""

import numpy as np

from ringcoulomb import QuantumState, deformed_Ylm
from ringcoulomb.expand import reconstruct, table

for b in (0.5, 5.0, 10.0):
    tab = table(1, 2, b, l_max=15)
    row = "  ".join(f"l={l}:{a * a:.5f}" for l, a in tab.entries[:4])
    print(f"b={b:4.1f}  {row}  defect={tab.completeness_defect:.2e}")

# truncation error is largest at the poles where (sin theta)^m' is not smooth
tab = table(1, 2, 10.0, l_max=40)
qs = QuantumState(4, 3, 1, 10.0)
for theta in (0.05, 0.3, np.pi / 2):
    err = abs(reconstruct(tab, theta, 0.0) - deformed_Ylm(qs, theta, 0.0))
    print(f"theta={theta:.2f}: |series - exact| = {err:.2e}")
