import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjrates.errors import ConfigError, MomentumUndefined, NonconvexHamiltonian, NotConverged
from hjrates.fd import solve_state_constraint_fd
from hjrates.grid import grid_for_domain, sup_error_on_region
from hjrates.hamiltonians import control_eikonal, double_well, pure_eikonal, shifted_eikonal
from hjrates.semilagrangian import (
    SlParams,
    Trajectory,
    check_characteristic_identity,
    check_dpp_identity,
    check_velocity_bound,
    extract_optimal_trajectory,
    lagrangian_table,
    solve_state_constraint_sl,
)

CE = control_eikonal()


def ce_exact(k):
    return lambda x: np.exp(-np.abs(x)) / 2 + np.exp(np.abs(x) - 2 * k) / 2


@pytest.fixture(scope="module")
def ce_k1():
    g = grid_for_domain("p1", 1, 1e-3)
    params = SlParams.auto(CE, g)
    u, rep = solve_state_constraint_sl(CE, g, params)
    return u, rep, params


def test_params_defaults():
    g = grid_for_domain("p1", 1, 1e-2)
    p = SlParams.auto(CE, g)
    w = np.asarray(p.controls)
    assert p.dt == g.h
    assert p.w_max == CE.gradient_bound + 1
    assert 0.0 in w and 1.0 in w and -1.0 in w
    assert np.all(np.diff(w) > 0)


@pytest.mark.parametrize("change", [
    dict(controls=(-1.0, -0.5, 0.5, 1.0)),
    dict(controls=(-0.5, 0.0, 0.5)),
    dict(controls=(1.0, 0.0, -1.0)),
    dict(dt=0.0),
    dict(constraint="bounce"),
])
def test_params_validation(change):
    p = dataclasses.replace(SlParams.auto(CE, grid_for_domain("p1", 1, 1e-2)), **change)
    with pytest.raises(ConfigError):
        p.validate(CE)


def test_rejects_nonconvex():
    with pytest.raises(NonconvexHamiltonian):
        solve_state_constraint_sl(double_well(), grid_for_domain("p1", 1, 1e-2))


def test_pure_eikonal_is_zero():
    u, rep = solve_state_constraint_sl(pure_eikonal(), grid_for_domain("p1", 2, 1e-2))
    assert rep.converged and np.all(u.values == 0.0)


def test_control_eikonal_matches_closed_form(ce_k1):
    u, rep, _ = ce_k1
    assert rep.converged
    assert sup_error_on_region(u, ce_exact(1), 0.9) <= 1e-2


def test_unconstrained_proxy():
    g = grid_for_domain("p1", 8, 5e-3)
    u, _ = solve_state_constraint_sl(CE, g)
    assert sup_error_on_region(u, lambda x: np.exp(-np.abs(x)) / 2, 1.0) <= 1e-2


def test_contraction(ce_k1):
    _, rep, params = ce_k1
    h = rep.history
    pos = h[:-1] > 0
    assert np.all(h[1:][pos] <= math.exp(-params.dt) * h[:-1][pos])


def test_bounded_below(ce_k1):
    u, rep, _ = ce_k1
    assert u.values.min() >= -CE.value_bound - 1e-8


def test_agrees_with_fd():
    for spec in (CE, pure_eikonal(), shifted_eikonal()):
        g = grid_for_domain("p1", 1, 1e-2)
        a, _ = solve_state_constraint_sl(spec, g)
        b, _ = solve_state_constraint_fd(spec, g)
        assert np.max(np.abs(a.values - b.values)) <= 2 * (g.h + g.h) * spec.lipschitz_p * 2


def test_project_fallback_runs():
    g = grid_for_domain("p1", 1, 1e-2)
    p = dataclasses.replace(SlParams.auto(CE, g), constraint="project")
    u, rep = solve_state_constraint_sl(CE, g, p)
    assert rep.converged
    assert sup_error_on_region(u, ce_exact(1), 0.9) <= 2e-2


def test_not_converged():
    g = grid_for_domain("p1", 1, 1e-2)
    p = dataclasses.replace(SlParams.auto(CE, g), max_iters=3)
    with pytest.raises(NotConverged) as info:
        solve_state_constraint_sl(CE, g, p)
    assert info.value.report.iterations == 3


@pytest.mark.parametrize("x0,direction,hit", [(0.5, -1.0, 0.5), (-0.25, 1.0, 0.75)])
def test_trajectory_runs_to_boundary_then_stops(ce_k1, x0, direction, hit):
    u, _, params = ce_k1
    traj = extract_optimal_trajectory(CE, u, x0, params)
    first = int(np.argmax(np.abs(traj.states) >= 1.0 - 1e-12))
    assert traj.times[first] == pytest.approx(hit, abs=2e-3)
    assert np.all(traj.controls_taken[:first] == direction)
    assert np.all(traj.controls_taken[first:] == 0.0)
    assert np.all(np.abs(traj.states) <= 1.0)


def test_trajectory_shape(ce_k1):
    u, _, params = ce_k1
    traj = extract_optimal_trajectory(CE, u, 0.1, params, horizon=0.05)
    assert len(traj.times) == len(traj.states) == len(traj.controls_taken) + 1
    np.testing.assert_allclose(np.diff(traj.times), params.dt)
    np.testing.assert_allclose(traj.states[1:], traj.states[:-1] - params.dt * traj.controls_taken)
    assert traj.momenta is None


def test_pure_eikonal_trajectory_is_constant():
    spec = pure_eikonal()
    g = grid_for_domain("p1", 2, 1e-2)
    u, _ = solve_state_constraint_sl(spec, g)
    p = SlParams.auto(spec, g)
    traj = extract_optimal_trajectory(spec, u, 0.7, p)
    assert np.all(traj.controls_taken == 0.0)
    np.testing.assert_allclose(traj.states, 0.7, atol=1e-12)
    assert check_velocity_bound(traj, 0.0)
    assert check_dpp_identity(spec, u, traj, 1.0) == 0.0
    assert check_characteristic_identity(spec, u, traj) == 0.0


def test_trajectory_rejects_outside_start(ce_k1):
    u, _, params = ce_k1
    with pytest.raises(ConfigError):
        extract_optimal_trajectory(CE, u, 1.5, params)


@pytest.mark.parametrize("x0", [0.5, -0.5, 0.25, -0.25])
@pytest.mark.parametrize("t", [0.25, 0.5])
def test_dpp_identity(ce_k1, x0, t):
    u, _, params = ce_k1
    traj = extract_optimal_trajectory(CE, u, x0, params)
    assert check_dpp_identity(CE, u, traj, t) <= 5e-3
    assert check_dpp_identity(CE, u, traj, 0.0) == 0.0


def test_dpp_rejects_unaligned_time(ce_k1):
    u, _, params = ce_k1
    traj = extract_optimal_trajectory(CE, u, 0.5, params, horizon=0.1)
    with pytest.raises(ConfigError):
        check_dpp_identity(CE, u, traj, 0.2)


def test_velocity_bound(ce_k1):
    u, _, params = ce_k1
    traj = extract_optimal_trajectory(CE, u, 0.5, params)
    assert check_velocity_bound(traj, 1.0)
    assert not check_velocity_bound(traj, -1.0)
    assert not check_velocity_bound(traj, 0.5)


def test_characteristic_identity(ce_k1):
    u, _, params = ce_k1
    traj = extract_optimal_trajectory(CE, u, 0.5, params)
    assert check_characteristic_identity(CE, u, traj) <= 2e-2


def test_characteristic_needs_interior_steps(ce_k1):
    u, _, params = ce_k1
    traj = extract_optimal_trajectory(CE, u, 1.0, params, horizon=0.05)
    with pytest.raises(MomentumUndefined):
        check_characteristic_identity(CE, u, traj)


def test_tie_break_prefers_negative():
    # at x = 0 moving either way costs the same: the negative control wins
    g = grid_for_domain("p1", 1, 1e-2)
    u, _ = solve_state_constraint_sl(CE, g)
    traj = extract_optimal_trajectory(CE, u, 0.0, SlParams.auto(CE, g), horizon=0.02)
    assert traj.controls_taken[0] == -1.0


@settings(max_examples=20)
@given(x=st.lists(st.floats(-3, 3), min_size=1, max_size=5), w=st.lists(st.floats(-2, 2), min_size=1, max_size=5))
def test_lagrangian_table_shape(x, w):
    table = lagrangian_table(CE, x, w)
    assert table.shape == (len(x), len(w))


def test_trajectory_dataclass_dt():
    t = Trajectory(np.array([0.0, 0.1]), np.array([0.0, 0.0]), np.array([0.0]))
    assert t.dt == pytest.approx(0.1)
