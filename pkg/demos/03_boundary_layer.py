"""Why errors are measured on a fixed region |x| <= R.

For the shifted eikonal, u_k(x) = exp(x - k) while the limit is u = 0.  At
the right endpoint u_k(k) = 1 for every k, so the sup error over the whole
domain never decays.  On any fixed region it decays like exp(-k).
"""

import numpy as np

from hjrates.fd import solve_state_constraint_fd
from hjrates.grid import grid_for_domain, sup_error_on_region
from hjrates.hamiltonians import shifted_eikonal
from hjrates.rates import fit_exponential

spec = shifted_eikonal()
ks = [1, 2, 3, 4]
centre, whole, region = [], [], []
for k in ks:
    u, _ = solve_state_constraint_fd(spec, grid_for_domain("p1", k, 1e-3))
    centre.append(float(u(0.0)))
    whole.append(float(np.max(np.abs(u.values))))
    region.append(sup_error_on_region(u, lambda x: 0 * x, 0.5))
    print(f"k={k}  u_k(k)={u.values[-1]:.5f}  sup over domain={whole[-1]:.5f}  "
          f"sup over |x|<=0.5={region[-1]:.5f}  u_k(0)={centre[-1]:.5f}")

print(f"\nrate of u_k(0) -> 0:        {fit_exponential(ks, centre).exponent:.4f}  (exp(-k) predicts 1)")
print(f"rate of sup over |x|<=0.5:  {fit_exponential(ks, region).exponent:.4f}")
print("sup over the whole domain stays at", sorted(set(np.round(whole, 4))))
