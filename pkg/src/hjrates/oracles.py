"""Closed-form state-constraint solutions and their large-domain limits.

>>> oid = OracleId("control-eikonal")
>>> round(float(oracle_solution(oid, 1, 0.0)), 6)
0.567668
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutsideDomain, UnknownExample
from .grid import REGION_EPS, build_domain
from .hamiltonians import HamiltonianSpec

ORACLE_TAGS = (
    "capped-cone",
    "holder-cone",
    "shifted-eikonal",
    "control-eikonal",
    "potential-double-well",
    "scaled-double-well",
    "p2-shifted-eikonal",
)


@dataclass(frozen=True)
class OracleId:
    tag: str
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 0.5
    m: float = 2.0

    def __post_init__(self):
        if self.tag not in ORACLE_TAGS:
            raise UnknownExample(f"no closed form for {self.tag!r}")
        if self.tag == "capped-cone" and not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")
        if self.tag == "holder-cone" and not 0 < self.gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")
        if self.tag == "scaled-double-well" and not self.m > 1:
            raise ValueError("m must exceed 1")

    @property
    def prototype(self) -> str:
        return "p2" if self.tag == "p2-shifted-eikonal" else "p1"

    @property
    def unique_limit(self) -> bool:
        """False when the bounded limit is not the only solution on the line."""
        return self.tag != "scaled-double-well"


def oracle_for(spec: HamiltonianSpec, prototype: str = "p1") -> OracleId | None:
    """The closed form paired with a catalog entry, or None if there is none."""
    prototype = prototype.lower()
    if prototype == "p2":
        return OracleId("p2-shifted-eikonal") if spec.id == "shifted-eikonal" else None
    if spec.id == "capped-cone":
        return OracleId("capped-cone", alpha=spec.alpha, beta=spec.beta)
    if spec.id == "holder-cone":
        return OracleId("holder-cone", gamma=spec.gamma)
    if spec.id == "scaled-double-well":
        return OracleId("scaled-double-well", m=spec.m)
    if spec.id in ("shifted-eikonal", "control-eikonal", "potential-double-well"):
        return OracleId(spec.id)
    return None


def _check_inside(x, r: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > r + REGION_EPS):
        raise OutsideDomain(f"points outside [-{r}, {r}]")
    return x


def oracle_solution(oid: OracleId, k: int, x):
    """``u_k(x)`` on the ``k``-th domain of the oracle's prototype."""
    _, r = build_domain(oid.prototype, k)
    x = _check_inside(x, r)
    ax = np.abs(x)
    t = oid.tag
    if t == "capped-cone":
        out = oid.alpha * oid.beta * np.exp((ax - k) / oid.alpha)
    elif t == "holder-cone":
        g = oid.gamma
        c = (1.0 - g) / g
        out = (c * (k + 1.0 / c - ax)) ** (g / (g - 1.0))
    elif t == "shifted-eikonal":
        out = np.exp(x - k)
    elif t == "control-eikonal":
        out = 0.5 * np.exp(-ax) + 0.5 * np.exp(ax - 2.0 * k)
    elif t == "potential-double-well":
        out = -0.5 * np.exp(-ax) + (np.exp(-k) - 0.5 * np.exp(-2.0 * k)) * np.exp(ax)
    elif t == "scaled-double-well":
        out = (1.0 + ax) ** oid.m / (oid.m * (1.0 + k) ** (oid.m - 1.0))
    else:
        out = np.exp(x - r)
    return out if out.ndim else float(out)


def oracle_limit(oid: OracleId, x):
    """The limit ``u`` on the whole line (or the unit interval for p2)."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise OutsideDomain("x must be finite")
    t = oid.tag
    if t == "control-eikonal":
        out = 0.5 * np.exp(-np.abs(x))
    elif t == "potential-double-well":
        out = -0.5 * np.exp(-np.abs(x))
    elif t == "p2-shifted-eikonal":
        x = _check_inside(x, 1.0)
        out = np.exp(x - 1.0)
    else:
        out = np.zeros_like(x)
    return out if out.ndim else float(out)


def oracle_difference(oid: OracleId, k: int, x):
    """``u_k(x) - u(x)`` from its own closed form, free of cancellation."""
    _, r = build_domain(oid.prototype, k)
    x = _check_inside(x, r)
    ax = np.abs(x)
    if oid.tag == "control-eikonal":
        out = 0.5 * np.exp(ax - 2.0 * k)
    elif oid.tag == "potential-double-well":
        out = (np.exp(-k) - 0.5 * np.exp(-2.0 * k)) * np.exp(ax)
    elif oid.tag == "p2-shifted-eikonal":
        out = np.exp(x - 1.0) * np.expm1(1.0 / k)
    else:
        return oracle_solution(oid, k, x)
    return out if out.ndim else float(out)


def exact_error(oid: OracleId, k: int, R: float, n_samples: int = 2001) -> float:
    """``max (u_k - u)`` over ``n_samples`` equispaced points of ``|x| <= R``."""
    _, r = build_domain(oid.prototype, k)
    if R < 0 or R > r + REGION_EPS:
        raise OutsideDomain(f"R={R} exceeds the domain half-width {r}")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    x = np.linspace(-R, R, n_samples) if n_samples > 1 else np.zeros(1)
    x = np.clip(x, -r, r)
    return float(np.max(oracle_difference(oid, k, x)))
