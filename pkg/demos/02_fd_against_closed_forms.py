"""Lax-Friedrichs solutions against the closed-form u_k.

For every entry with a known solution we solve on [-k, k] (or on the
saturating intervals for the shifted eikonal) and report the sup error on the
inner three quarters of the domain, together with the iteration count and the
artificial viscosity the solver settled on.
"""

from hjrates.fd import solve_state_constraint_fd
from hjrates.grid import build_domain, grid_for_domain, sup_error_on_region
from hjrates.hamiltonians import get_hamiltonian
from hjrates.oracles import oracle_for, oracle_solution

H = 1e-3
cases = [(name, "p1", k) for name in ("capped-cone", "holder-cone", "shifted-eikonal",
                                      "control-eikonal", "potential-double-well") for k in (1, 2)]
cases += [("shifted-eikonal", "p2", k) for k in (2, 4)]

print(f"{'example':24s} proto  k   sup error   iterations  theta   seconds")
for name, proto, k in cases:
    spec = get_hamiltonian(name)
    oid = oracle_for(spec, proto)
    u, report = solve_state_constraint_fd(spec, grid_for_domain(proto, k, H))
    R = 0.75 * build_domain(proto, k)[1]
    err = sup_error_on_region(u, lambda x: oracle_solution(oid, k, x), R)
    print(f"{name:24s} {proto:5s} {k:2d}   {err:.3e}   {report.iterations:9d}  "
          f"{report.theta:5.2f}   {report.wall_time:6.2f}")

# halving h roughly halves the error: the scheme is first order
spec = get_hamiltonian("capped-cone")
oid = oracle_for(spec, "p1")
print("\nfirst-order convergence, capped cone k=1")
for h in (4e-2, 2e-2, 1e-2, 5e-3):
    u, _ = solve_state_constraint_fd(spec, grid_for_domain("p1", 1, h))
    print(f"  h={h:.0e}  error={sup_error_on_region(u, lambda x: oracle_solution(oid, 1, x), 1.0):.3e}")
