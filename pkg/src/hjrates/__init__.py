"""Rates of convergence of state-constraint Hamilton-Jacobi solutions.

Static equations ``u + H(x, u') = 0`` are solved on growing intervals
``[-k, k]`` (or ``[-(1 - 1/k), 1 - 1/k]``) with state-constraint boundary
behaviour, and the decay of ``u_k - u`` in ``k`` is measured and fitted.
"""

from .errors import (
    ConfigError,
    DegenerateData,
    HJError,
    InvalidGrid,
    InvalidIndex,
    MomentumUndefined,
    NonCoercive,
    NonconvexHamiltonian,
    NotConverged,
    OutsideDomain,
    RegionTooLarge,
    UnknownExample,
)
from .experiment import ExperimentConfig, ResultRow, emit_report, fit_rows, run_experiment
from .fd import FdParams, SolveReport, lf_numerical_hamiltonian, residual, solve_state_constraint_fd
from .grid import Grid1D, GridFunction, build_domain, build_grid, grid_for_domain, sup_error_on_region
from .hamiltonians import (
    CATALOG_IDS,
    HamiltonianSpec,
    eval_hamiltonian,
    get_hamiltonian,
    legendre_transform,
    lipschitz_bound,
)
from .oracles import OracleId, exact_error, oracle_for, oracle_limit, oracle_solution
from .rates import RateFit, Theorem, classify_rate, fit_exponential, fit_power_law, verify_theorem_bound
from .semilagrangian import (
    SlParams,
    Trajectory,
    check_characteristic_identity,
    check_dpp_identity,
    check_velocity_bound,
    extract_optimal_trajectory,
    solve_state_constraint_sl,
)

__version__ = "0.1.0"
