"""Experiment runner: solve on a ladder of domains, measure errors, fit rates.

A run is described by an ``ExperimentConfig``.  Each (solver, k) cell is an
independent solve; errors are measured on ``|x| <= region_R`` against the
closed-form limit when one exists, and otherwise against a solve on the
larger domain ``2 * max(k_list)`` used as a proxy for the limit.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DegenerateData, NotConverged, RegionTooLarge
from .fd import FdParams, solve_state_constraint_fd
from .grid import build_domain, grid_for_domain, sup_error_on_region
from .hamiltonians import get_hamiltonian
from .oracles import oracle_for, oracle_limit
from .rates import EXPONENTIAL, classify_rate, fit_exponential, fit_power_law, verify_theorem_bound
from .semilagrangian import SlParams, solve_state_constraint_sl

CSV_COLUMNS = (
    "example", "prototype", "solver", "k", "h", "region_R",
    "sup_error", "residual", "iterations", "wall_ms", "converged",
)
SOLVERS = ("fd", "sl")


@dataclass(frozen=True)
class ExperimentConfig:
    example: str
    k_list: tuple
    region_R: float
    prototype: str = "p1"
    solver: str = "fd"
    h: float = 1e-3
    dt: float | None = None
    n_controls: int = 201
    w_max: float | None = None
    tol: float | None = None
    theta: float | None = None
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 0.5
    m: float = 2.0
    error_floor: float = 0.0
    theorem: str | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "k_list", tuple(int(k) for k in self.k_list))
        object.__setattr__(self, "prototype", self.prototype.lower())
        if not self.k_list:
            raise ConfigError("k_list is empty")
        if list(self.k_list) != sorted(set(self.k_list)):
            raise ConfigError("k_list must be strictly increasing")
        if self.solver not in SOLVERS + ("both",):
            raise ConfigError(f"solver must be fd, sl or both, got {self.solver!r}")
        if self.h <= 0 or (self.dt is not None and self.dt <= 0):
            raise ConfigError("h and dt must be positive")
        extent = min(build_domain(self.prototype, k)[1] for k in self.k_list)
        if not 0 <= self.region_R < extent:
            raise RegionTooLarge(f"region_R={self.region_R} must lie below the smallest extent {extent}")
        if self.workers < 1:
            raise ConfigError("workers must be positive")

    @property
    def solvers(self) -> tuple:
        return SOLVERS if self.solver == "both" else (self.solver,)

    def hamiltonian(self):
        return get_hamiltonian(self.example, self.alpha, self.beta, self.gamma, self.m)


@dataclass(frozen=True)
class ResultRow:
    example: str
    prototype: str
    solver: str
    k: int
    h: float
    region_R: float
    sup_error: float
    residual: float
    iterations: int
    wall_ms: float
    converged: bool


@dataclass
class _Cell:
    solver: str
    k: int
    solution: object = None
    report: object = None
    converged: bool = True
    extra: dict = field(default_factory=dict)


def default_theorem(spec, prototype: str) -> str | None:
    """The rate bound each catalog entry is checked against by default."""
    if prototype == "p2":
        return "T15"
    if spec.id == "holder-cone":
        return "P44"
    if spec.id == "potential-double-well":
        return "T11"
    if spec.id == "scaled-double-well":
        return None
    if spec.is_convex_in_p:
        return "T14"
    return "T12"


def solve_cell(config: ExperimentConfig, solver: str, k: int):
    """Solve one (solver, k) cell; returns ``(solution, report, converged)``."""
    spec = config.hamiltonian()
    grid = grid_for_domain(config.prototype, k, config.h)
    try:
        if solver == "fd":
            kw = {} if config.tol is None else {"tol": config.tol}
            params = FdParams.auto(spec, grid, theta=config.theta, **kw)
            u, report = solve_state_constraint_fd(spec, grid, params)
        else:
            kw = {} if config.tol is None else {"tol": config.tol}
            params = SlParams.auto(spec, grid, dt=config.dt, n_controls=config.n_controls,
                                   w_max=config.w_max, **kw)
            u, report = solve_state_constraint_sl(spec, grid, params)
    except NotConverged as exc:
        return exc.solution, exc.report, False
    return u, report, True


def _solve_all(config, cells):
    if config.workers == 1 or len(cells) == 1:
        return [solve_cell(config, s, k) for s, k in cells]
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        futures = [pool.submit(solve_cell, config, s, k) for s, k in cells]
        return [f.result() for f in futures]


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    """One row per (solver, k), sorted by solver then k."""
    spec = config.hamiltonian()
    oid = oracle_for(spec, config.prototype)
    cells = [(s, k) for s in config.solvers for k in config.k_list]
    proxy_k = 2 * config.k_list[-1]
    if oid is None:
        cells += [(s, proxy_k) for s in config.solvers]
    results = dict(zip(cells, _solve_all(config, cells)))

    rows = []
    for solver in config.solvers:
        if oid is None:
            # the proxy is a grid function, so it is interpolated at the nodes
            limit = results[(solver, proxy_k)][0]
        else:
            limit = lambda x: oracle_limit(oid, x)  # noqa: E731
        for k in config.k_list:
            u, report, converged = results[(solver, k)]
            rows.append(ResultRow(
                example=spec.id,
                prototype=config.prototype,
                solver=solver,
                k=k,
                h=u.grid.h,
                region_R=float(config.region_R),
                sup_error=sup_error_on_region(u, limit, config.region_R),
                residual=float(report.final_residual),
                iterations=int(report.iterations),
                wall_ms=1e3 * report.wall_time,
                converged=bool(converged),
            ))
    return sorted(rows, key=lambda r: (r.example, r.solver, r.k))


def fit_rows(rows, config: ExperimentConfig) -> list[dict]:
    """Rate fits per solver over converged rows above the error floor.

    The model is chosen from the data when the ks span a factor of four, and
    from the default rate bound otherwise.  Solvers with fewer than three
    usable points produce no fit.
    """
    spec = config.hamiltonian()
    theorem = config.theorem or default_theorem(spec, config.prototype)
    fits = []
    for solver in sorted({r.solver for r in rows}):
        use = [r for r in rows if r.solver == solver and r.converged and r.sup_error > 0]
        ks = np.array([r.k for r in use], dtype=float)
        errs = np.array([r.sup_error for r in use])
        if config.error_floor > 0:
            keep = errs >= 10.0 * config.error_floor
            ks, errs = ks[keep], errs[keep]
        try:
            if ks.size >= 3 and ks.max() >= 4 * ks.min():
                fit, _ = classify_rate(ks, errs)
            elif theorem in ("T12", "T14"):
                fit = fit_exponential(ks, errs)
            else:
                fit = fit_power_law(ks, errs, offset="auto" if ks.size >= 4 else 0.0)
        except DegenerateData:
            continue
        holds, c = None, None
        if theorem is not None:
            try:
                holds, c = verify_theorem_bound(theorem, ks, errs, config.region_R, gamma=spec.gamma)
            except DegenerateData:
                pass
        fits.append({
            "example": spec.id,
            "prototype": config.prototype,
            "solver": solver,
            "region_R": float(config.region_R),
            "model": fit.model,
            "amplitude": fit.amplitude,
            "exponent": fit.exponent,
            "rms_log_residual": fit.rms_log_residual,
            "offset": fit.offset if fit.model != EXPONENTIAL else 0.0,
            "theorem": theorem,
            "holds": holds,
            "fitted_C": c,
        })
    return fits


def _csv_field(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.16e}"
    return str(value)


def emit_report(rows, fits, format: str, path) -> Path:
    """Write rows (and fits, for json) to ``path``; nothing is written for empty rows."""
    if not rows:
        raise ConfigError("no result rows to report")
    if format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {format!r}")
    path = Path(path)
    if format == "csv":
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in rows:
                writer.writerow([_csv_field(getattr(r, c)) for c in CSV_COLUMNS])
    else:
        doc = {"rows": [dataclasses.asdict(r) for r in rows], "fits": list(fits or [])}
        path.write_text(json.dumps(doc, indent=2, allow_nan=True) + "\n")
    return path


def read_csv_rows(path) -> list[ResultRow]:
    """Parse a CSV written by ``emit_report`` back into rows."""
    out = []
    with Path(path).open(newline="") as fh:
        for rec in csv.DictReader(fh):
            out.append(ResultRow(
                example=rec["example"], prototype=rec["prototype"], solver=rec["solver"],
                k=int(rec["k"]), h=float(rec["h"]), region_R=float(rec["region_R"]),
                sup_error=float(rec["sup_error"]), residual=float(rec["residual"]),
                iterations=int(rec["iterations"]), wall_ms=float(rec["wall_ms"]),
                converged=rec["converged"] == "true",
            ))
    return out


def read_config(path) -> dict:
    """Flat ``key = value`` file; blank lines and ``#`` comments are skipped."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("_", "-")] = value
    return values


_KEYS = {
    "example": ("example", str),
    "prototype": ("prototype", str),
    "k": ("k_list", lambda s: tuple(int(v) for v in str(s).replace(",", " ").split())),
    "region": ("region_R", float),
    "solver": ("solver", str),
    "h": ("h", float),
    "dt": ("dt", float),
    "n-controls": ("n_controls", int),
    "w-max": ("w_max", float),
    "tol": ("tol", float),
    "theta": ("theta", float),
    "alpha": ("alpha", float),
    "beta": ("beta", float),
    "gamma": ("gamma", float),
    "m": ("m", float),
    "error-floor": ("error_floor", float),
    "theorem": ("theorem", str),
    "workers": ("workers", int),
}

# keys accepted in config files that do not describe the experiment itself
_OUTPUT_KEYS = ("out", "format")


def config_from_mapping(values: dict) -> ExperimentConfig:
    """Build a config from CLI-style keys (``region``, ``error-floor`` ...)."""
    kwargs = {}
    for key, raw in values.items():
        key = key.replace("_", "-")
        if key in _OUTPUT_KEYS or raw is None:
            continue
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        name, conv = _KEYS[key]
        try:
            kwargs[name] = conv(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    missing = [k for k in ("example", "k", "region") if _KEYS[k][0] not in kwargs]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    if math.isnan(kwargs["region_R"]):
        raise ConfigError("region must be a number")
    return ExperimentConfig(**kwargs)
