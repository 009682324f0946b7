"""Optimal control picture of the convex control eikonal.

H(x, p) = |p| - exp(-|x|) is the Hamiltonian of the problem

    minimise  int_0^inf e^{-s} exp(-|eta(s)|) ds,   |eta'| <= 1,  eta in [-k, k].

Running cost is smallest far from the origin, so an optimal path runs to the
nearer wall at full speed and then stays there.  We solve the discrete dynamic
programming equation, replay the greedy controls, and check the dynamic
programming and characteristic identities along the way.
"""

import numpy as np

from hjrates.grid import grid_for_domain, sup_error_on_region
from hjrates.hamiltonians import control_eikonal
from hjrates.oracles import OracleId, oracle_solution
from hjrates.semilagrangian import (
    SlParams,
    check_characteristic_identity,
    check_dpp_identity,
    check_velocity_bound,
    extract_optimal_trajectory,
    solve_state_constraint_sl,
    trajectory_momenta,
)

spec = control_eikonal()
grid = grid_for_domain("p1", 1, 1e-3)
params = SlParams.auto(spec, grid)
u, report = solve_state_constraint_sl(spec, grid, params)
oid = OracleId("control-eikonal")
print(f"value iteration: {report.iterations} sweeps, {report.wall_time:.2f}s")
print(f"sup error against the closed form on |x|<=0.9: "
      f"{sup_error_on_region(u, lambda x: oracle_solution(oid, 1, x), 0.9):.2e}")
ratios = report.history[1:] / report.history[:-1]
print(f"worst increment ratio {np.nanmax(ratios[np.isfinite(ratios)]):.6f} vs exp(-dt) {np.exp(-params.dt):.6f}")

for x0 in (-0.5, -0.25, 0.25, 0.5):
    traj = extract_optimal_trajectory(spec, u, x0, params)
    wall = int(np.argmax(np.abs(traj.states) >= 1 - 1e-12))
    p = trajectory_momenta(spec, u, traj)
    print(f"\nx0={x0:+.2f}: reaches x={traj.states[wall]:+.0f} at t={traj.times[wall]:.3f} "
          f"with w={traj.controls_taken[0]:+.0f}, then w=0 for the remaining "
          f"{len(traj.controls_taken) - wall} steps")
    print(f"  DPP defect t=0.25: {check_dpp_identity(spec, u, traj, 0.25):.1e}   "
          f"t=0.5: {check_dpp_identity(spec, u, traj, 0.5):.1e}")
    print(f"  |w| <= 1: {check_velocity_bound(traj, 1.0)}   "
          f"characteristic defect {check_characteristic_identity(spec, u, traj):.1e}")
    print(f"  momentum at t=0.1: {p[100]:+.4f}  (slope of u there: {np.gradient(u.values, grid.h)[int(round((traj.states[100] + 1) / grid.h))]:+.4f})")
