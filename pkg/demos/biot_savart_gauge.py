"""Biot--Savart reconstruction of the Loss--Yau potential and its gauge.

The integral of B always returns the divergence-free potential; the closed form
differs from it by a gradient.
"""

import numpy as np

from zeromodes import fields as fl
from zeromodes import integralops as io_

ly = fl.loss_yau()
w = ly.params["w_unit"]
for x in ([0, 0, 0], [1, 0, 0], [0.5, 0.5, 0.5]):
    x = np.array(x, float)
    A = io_.biot_savart(ly, x)
    print(f"x={x}: A_BS={np.round(A.value, 8)}  A_LY={np.round(fl.loss_yau_A_closed(x, w), 8)}  "
          f"A_C={np.round(fl.loss_yau_coulomb_A(x, w), 8)}")

aud = io_.curl_div_audit(lambda p: io_.biot_savart(ly, p).value, np.array([0.5, 0.5, 0.5]),
                         B=lambda p: fl.loss_yau_B_closed(p, w))
print(f"curl A_BS - B = {aud.curl_residual:.1e}, div A_BS = {aud.div:.1e}")
aud = io_.curl_div_audit(lambda p: fl.loss_yau_A_closed(p, w), np.array([0.5, 0.5, 0.5]))
print(f"div A_LY = {aud.div:.3f}")

g = io_.dirac_green_convolve(io_.zero_mode_source(ly), np.zeros(3))
print("G * (sigma.A psi) at 0:", np.round(g.value, 10), " psi(0):", np.round(ly.params["phi0"], 10))
