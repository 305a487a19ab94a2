"""Lowest eigenvalue of the Pauli operator for t A_LY on a Dirichlet box.

Usage: python pauli_scan.py [n] [L]
"""

import sys

from zeromodes import fields as fl
from zeromodes import spectral as spc

n = int(sys.argv[1]) if len(sys.argv) > 1 else 24
L = float(sys.argv[2]) if len(sys.argv) > 2 else 8.0
grid = spc.GridSpec(n, L)
ly = fl.loss_yau()

free = spc.smallest_eigs(spc.pauli_operator(grid), 1).values[0]
print(f"n={n}, L={L}, h={grid.h:.3f}: t=0 lambda1 = {free:.6f} (box {grid.box_ground():.6f})")

curve = spc.t_scan(ly, grid, 0.0, 2.0, 21)
for p in curve.points:
    print(f"  t={p.t:4.2f}  lambda1={p.lambda1:.6f}  " + "#" * int(200 * p.lambda1))
t_star, lam = curve.minimum()
print(f"minimum {lam:.6f} at t = {t_star:.2f}")
