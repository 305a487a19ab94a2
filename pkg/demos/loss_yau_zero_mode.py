"""Build the Loss--Yau zero mode, check the Dirac equation pointwise and print its norms."""

import numpy as np

from zeromodes import fields as fl
from zeromodes import norms

ly = fl.loss_yau()
print("phi0 =", np.round(ly.params["phi0"], 6), " w =", np.round(ly.params["w_unit"], 6))

xs = fl.sample_points(1000, 3, seed=0)
res = fl.zero_mode_residual(ly, xs)
print(f"max |sigma.(-i grad - A) psi| over 1000 points: {res.max():.2e}")

audit = fl.finite_difference_audit(ly, "A", np.array([0.4, -0.2, 0.7]))
print(f"jet vs central differences (h=1e-4): grad {audit.grad_dev:.1e}, hess {audit.hess_dev:.1e}")

B32 = norms.lp_norm_radial(norms.family_profile(ly, "B"), 1.5, 3)
print(f"||B||_3/2 = {B32:.10f}   4 S_3 = {4 * norms.sobolev(3):.10f}")
zc = norms.zc_quotient(ly)
print(f"critical-charge quotient {zc.quotient:.6f} = 9 pi^3 ({9 * np.pi**3:.6f}); "
      f"Z = {zc.z:.0f}, lower bound {zc.z_bound:.0f}")

# the same construction in five dimensions
app = fl.appendix_a(5)
print("d=5 omega:\n", np.round(app.params["omega"], 12) + 0.0)
print(f"d=5 residual {fl.zero_mode_residual(app, fl.sample_points(200, 5, 1)).max():.2e}")
