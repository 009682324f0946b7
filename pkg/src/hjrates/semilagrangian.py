"""Semi-Lagrangian value iteration for convex state-constraint problems.

The value function of the discounted control problem

    u(x) = inf  int_0^inf e^{-s} L(eta(s), -eta'(s)) ds,   eta stays in [a, b],

is approximated by the fixed point of the one-step dynamic programming map

    u(x_i) = min_w { dt L(x_i, w) + e^{-dt} I[u](x_i - dt w) },

where ``w`` ranges over a finite control set, ``I`` is piecewise-linear
interpolation, and controls whose foot point leaves the interval are
excluded.  The map is a sup-norm contraction with factor ``e^{-dt}``.

Trajectory helpers replay the greedy argmin on a converged value function and
check the dynamic programming identity, the velocity bound and the
characteristic identity ``u(eta) + H(eta, p) = 0`` along optimal paths.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numba
import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, MomentumUndefined, NonconvexHamiltonian, NotConverged
from .fd import SolveReport
from .grid import Grid1D, GridFunction
from .hamiltonians import LAGRANGIAN_SENTINEL, HamiltonianSpec, legendre_transform

# foot points within this many cells of the interval count as inside
_FOOT_EPS = 1e-9


@dataclass(frozen=True)
class SlParams:
    dt: float
    controls: tuple
    tol: float = 1e-8
    max_iters: int = 1_000_000
    constraint: str = "exclude"

    @classmethod
    def auto(cls, spec: HamiltonianSpec, grid: Grid1D, *, dt: float | None = None,
             n_controls: int = 201, w_max: float | None = None, tol: float = 1e-8,
             max_iters: int = 1_000_000, constraint: str = "exclude") -> "SlParams":
        """Symmetric control set of ``n_controls`` (made odd) velocities in ``[-w_max, w_max]``."""
        if dt is None:
            dt = grid.h
        if w_max is None:
            w_max = spec.gradient_bound + 1.0
        if n_controls < 3:
            raise ConfigError("need at least 3 controls")
        if n_controls % 2 == 0:
            n_controls += 1
        w = np.linspace(-w_max, w_max, n_controls)
        w[n_controls // 2] = 0.0
        # optimal speeds of the convex entries sit at the edge of the
        # Lagrangian's domain, so that edge must be a control
        v = spec.velocity_bound
        if math.isfinite(v) and v < w_max:
            w = np.union1d(w[np.abs(np.abs(w) - v) > 1e-12], [-v, v])
        return cls(dt=float(dt), controls=tuple(w.tolist()), tol=tol,
                   max_iters=max_iters, constraint=constraint)

    @property
    def w_max(self) -> float:
        return max(abs(self.controls[0]), abs(self.controls[-1]))

    def validate(self, spec: HamiltonianSpec) -> None:
        w = np.asarray(self.controls, dtype=float)
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if np.any(np.diff(w) <= 0):
            raise ConfigError("controls must be strictly increasing")
        if not np.any(w == 0.0):
            raise ConfigError("the zero control (staying put) must be admissible")
        if self.w_max < spec.velocity_bound:
            raise ConfigError(
                f"w_max={self.w_max} is below the velocity bound {spec.velocity_bound} of {spec.id}"
            )
        if self.tol <= 0 or self.max_iters < 1:
            raise ConfigError("tol and max_iters must be positive")
        if self.constraint not in ("exclude", "project"):
            raise ConfigError("constraint must be 'exclude' or 'project'")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    controls_taken: np.ndarray
    momenta: np.ndarray | None = None

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


def lagrangian_table(spec: HamiltonianSpec, x, w) -> np.ndarray:
    """``L(x_i, w_j)`` as an ``(len(x), len(w))`` array."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if spec.has_closed_form_lagrangian:
        return np.asarray(legendre_transform(spec, x[:, None], w[None, :]))
    # numeric sup: one row at a time keeps the (x, w, p) cube out of memory
    return np.stack([legendre_transform(spec, xi, w) for xi in x])


@numba.njit(cache=True)
def _dpp_sweep(u, cost, shifts, disc, project, out):
    n, m = cost.shape
    for i in range(n):
        best = np.inf
        for j in range(m):
            f = i + shifts[j]
            if f < -_FOOT_EPS or f > n - 1 + _FOOT_EPS:
                if not project:
                    continue
            f = min(max(f, 0.0), n - 1.0)
            lo = int(math.floor(f))
            frac = f - lo
            if lo >= n - 1 or frac < _FOOT_EPS:
                val = u[min(lo, n - 1)]
            elif frac > 1.0 - _FOOT_EPS:
                val = u[lo + 1]
            else:
                val = (1.0 - frac) * u[lo] + frac * u[lo + 1]
            v = cost[i, j] + disc * val
            if v < best:
                best = v
        out[i] = best


def solve_state_constraint_sl(spec: HamiltonianSpec, grid: Grid1D,
                              params: SlParams | None = None) -> tuple[GridFunction, SolveReport]:
    """Value iteration for the discrete dynamic programming equation.

    Starts from the value of staying put forever, which is a discrete
    supersolution, so iterates decrease monotonically to the fixed point.
    ``report.history`` holds ``|u^{n+1} - u^n|_inf`` per iteration.
    """
    if not spec.is_convex_in_p:
        raise NonconvexHamiltonian(f"{spec.id} is not convex in p; use the fd solver")
    if params is None:
        params = SlParams.auto(spec, grid)
    params.validate(spec)
    w = np.asarray(params.controls, dtype=float)
    cost = params.dt * lagrangian_table(spec, grid.nodes, w)
    # controls outside the Lagrangian's domain everywhere can never win
    live = np.any(cost < 0.5 * params.dt * LAGRANGIAN_SENTINEL, axis=0)
    w, cost = w[live], np.ascontiguousarray(cost[:, live])
    shifts = -params.dt * w / grid.h
    disc = math.exp(-params.dt)
    project = params.constraint == "project"

    u = cost[:, np.flatnonzero(w == 0.0)[0]] / (1.0 - disc)
    out = np.empty_like(u)
    history = []
    start = time.perf_counter()
    it = 0
    res = np.inf
    while it < params.max_iters:
        _dpp_sweep(u, cost, shifts, disc, project, out)
        res = float(np.max(np.abs(out - u)))
        history.append(res)
        u, out = out, u
        it += 1
        if res <= params.tol:
            break
    report = SolveReport(
        iterations=it,
        final_residual=res,
        converged=res <= params.tol,
        wall_time=time.perf_counter() - start,
        history=np.asarray(history),
    )
    solution = GridFunction(grid, u.copy())
    if not report.converged:
        raise NotConverged(
            f"sl solver stopped after {it} iterations with residual {res:.3e}",
            solution=solution, report=report,
        )
    return solution, report


def _foot_values(u: GridFunction, feet: np.ndarray, admissible: np.ndarray) -> np.ndarray:
    vals = np.full(feet.shape, np.inf)
    vals[admissible] = u(feet[admissible])
    return vals


def extract_optimal_trajectory(spec: HamiltonianSpec, u: GridFunction, x0: float,
                               params: SlParams, horizon: float | None = None,
                               tie_tol: float = 1e-12) -> Trajectory:
    """Follow the greedy argmin of the one-step problem from ``x0``.

    Ties (within ``tie_tol`` relative) go to the smallest ``|w|``, then to the
    negative control.  States are clipped to the interval and snapped onto
    nodes they sit within round-off of.
    """
    grid = u.grid
    a, b, h = grid.a, grid.b, grid.h
    if not a - 1e-12 <= x0 <= b + 1e-12:
        raise ConfigError(f"x0={x0} lies outside [{a}, {b}]")
    if horizon is None:
        horizon = 3.0 * max(abs(a), abs(b)) / params.w_max + 1.0
    steps = int(math.ceil(horizon / params.dt - 1e-9))
    w = np.asarray(params.controls, dtype=float)
    # tie-break order: |w| ascending, negative before positive
    order = np.lexsort((w > 0, np.abs(w)))
    disc = math.exp(-params.dt)
    eta = float(x0)
    states = [eta]
    taken = []
    for _ in range(steps):
        feet = eta - params.dt * w
        if params.constraint == "project":
            feet = np.clip(feet, a, b)
        admissible = (feet >= a - _FOOT_EPS * h) & (feet <= b + _FOOT_EPS * h)
        feet = np.clip(feet, a, b)
        cost = params.dt * np.asarray(lagrangian_table(spec, [eta], w))[0]
        vals = cost + disc * _foot_values(u, feet, admissible)
        best = np.min(vals)
        ties = vals <= best + tie_tol * max(1.0, abs(best))
        j = next(j for j in order if ties[j])
        taken.append(w[j])
        eta = float(feet[j])
        node = round((eta - a) / h)
        if abs(eta - (a + node * h)) < 1e-9 * h:
            eta = float(grid.nodes[node])
        states.append(eta)
    times = params.dt * np.arange(steps + 1)
    return Trajectory(times=times, states=np.asarray(states), controls_taken=np.asarray(taken))


def check_dpp_identity(spec: HamiltonianSpec, u: GridFunction, traj: Trajectory, t: float) -> float:
    """Defect of ``u(x0) = sum e^{-s} L dt + e^{-t} u(eta(t))`` along ``traj``."""
    if t == 0:
        return 0.0
    dt = traj.dt
    n = int(round(t / dt))
    if abs(n * dt - t) > 1e-9 * max(1.0, t) or n > len(traj.controls_taken):
        raise ConfigError(f"t={t} is not a step multiple within the trajectory horizon")
    eta = traj.states[:n]
    w = traj.controls_taken[:n]
    running = np.array([lagrangian_table(spec, [e], [v])[0, 0] for e, v in zip(eta, w)])
    total = float(np.sum(np.exp(-traj.times[:n]) * running) * dt)
    total += math.exp(-traj.times[n]) * float(u(traj.states[n]))
    return abs(float(u(traj.states[0])) - total)


def check_velocity_bound(traj: Trajectory, bound: float) -> bool:
    speeds = np.abs(traj.controls_taken)
    top = float(np.max(speeds)) if speeds.size else 0.0
    return top <= bound


def _momentum(spec, u_val, x, w, delta_v):
    """A momentum in the subdifferential of ``L(x, .)`` at ``w``.

    Away from kinks this is the centred difference quotient.  At a kink the
    one-sided quotients bracket the subdifferential, and the element that
    best satisfies ``u + H(x, p) = 0`` is returned.
    """
    lv = lagrangian_table(spec, [x], [w - delta_v, w, w + delta_v])[0]
    if all(abs(w - k) >= 10 * delta_v for k in spec.lagrangian_kinks):
        return (lv[2] - lv[0]) / (2 * delta_v)
    cap = 2.0 * spec.gradient_bound
    lo = min(max((lv[1] - lv[0]) / delta_v, -cap), cap)
    hi = min(max((lv[2] - lv[1]) / delta_v, -cap), cap)
    if hi - lo < 1e-14:
        return lo
    defect = lambda p: u_val + float(spec(x, p))  # noqa: E731
    ps = np.linspace(lo, hi, 2001)
    vals = u_val + spec(x, ps)
    sign_change = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)
    if sign_change.size:
        i = sign_change[0]
        if vals[i] == 0.0:
            return ps[i]
        return brentq(defect, ps[i], ps[i + 1], xtol=1e-14)
    return ps[np.argmin(np.abs(vals))]


def trajectory_momenta(spec: HamiltonianSpec, u: GridFunction, traj: Trajectory,
                       delta_v: float = 1e-4) -> np.ndarray:
    """Momentum per step; NaN on steps taken from the boundary."""
    grid = u.grid
    edge = 0.5 * grid.h
    out = np.full(len(traj.controls_taken), np.nan)
    for j, (eta, w) in enumerate(zip(traj.states[:-1], traj.controls_taken)):
        if eta <= grid.a + edge or eta >= grid.b - edge:
            continue
        out[j] = _momentum(spec, float(u(eta)), float(eta), float(w), delta_v)
    return out


def check_characteristic_identity(spec: HamiltonianSpec, u: GridFunction, traj: Trajectory,
                                  delta_v: float = 1e-4) -> float:
    """Largest ``|u(eta_j) + H(eta_j, p_j)|`` over interior steps with ``t_j > 0``.

    Steps on the boundary arc are excluded; the identity is only claimed
    along interior characteristics.
    """
    if not spec.is_convex_in_p:
        raise NonconvexHamiltonian(f"{spec.id} has no Lagrangian")
    p = trajectory_momenta(spec, u, traj, delta_v)
    steps = np.arange(len(p))
    use = (steps >= 1) & np.isfinite(p)
    if not np.any(use):
        raise MomentumUndefined("no interior step with a usable momentum")
    eta = traj.states[:-1][use]
    defects = np.abs(u(eta) + spec(eta, p[use]))
    return float(np.max(defects))
