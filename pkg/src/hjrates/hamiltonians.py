"""Catalog of one-dimensional Hamiltonians with verified metadata.

Every entry has the separable form ``H(x, p) = a(x) * K(p) + V(x)``; the
solvers exploit this by precomputing ``a`` and ``V`` on the grid once.

>>> h = capped_cone(alpha=1.0, beta=1.0)
>>> float(h(0.0, 0.5))
-0.5
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NonconvexHamiltonian, UnknownExample

# Stand-in for +inf outside the effective domain of a Lagrangian.  Finite so
# that the semi-Lagrangian minimisation simply never selects those controls.
LAGRANGIAN_SENTINEL = 1e12

CATALOG_IDS = (
    "capped-cone",
    "holder-cone",
    "shifted-eikonal",
    "double-well",
    "scaled-double-well",
    "potential-double-well",
    "control-eikonal",
    "pure-eikonal",
)

_CONVEX = {"shifted-eikonal", "control-eikonal", "pure-eikonal"}


@dataclass(frozen=True)
class HamiltonianSpec:
    """An immutable catalog entry.

    ``value_bound`` bounds any state-constraint solution in sup norm,
    ``gradient_bound`` bounds its slope, and ``lipschitz_p`` is the slope of
    ``p -> H`` on ``|p| <= gradient_bound`` (used as artificial viscosity).
    ``velocity_bound`` is the radius of the effective domain of the Legendre
    transform (``inf`` for nonconvex entries).  ``assumptions`` lists which of
    H1..H5 the entry satisfies.
    """

    id: str
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    m: float | None = None
    is_convex_in_p: bool = False
    value_bound: float = 1.0
    gradient_bound: float = 1.0
    lipschitz_p: float = 1.0
    velocity_bound: float = math.inf
    assumptions: frozenset = field(default_factory=frozenset)

    def kernel(self, p):
        """Momentum part ``K(p)``."""
        p = np.asarray(p, dtype=float)
        ap = np.abs(p)
        if self.id == "capped-cone":
            return np.maximum(-self.alpha * ap, self.alpha * (ap - 2.0 * self.beta))
        if self.id == "holder-cone":
            return np.maximum(-(ap**self.gamma), ap - 2.0)
        if self.id == "shifted-eikonal":
            return np.abs(p - 1.0) - 1.0
        if self.id in ("double-well", "scaled-double-well", "potential-double-well"):
            return np.maximum(-ap, ap - 2.0)
        return ap

    def scale(self, x):
        """Space-dependent factor ``a(x)`` multiplying the kernel."""
        x = np.asarray(x, dtype=float)
        if self.id == "scaled-double-well":
            return (1.0 + np.abs(x)) / self.m
        return np.ones_like(x)

    def potential(self, x):
        """Additive space-dependent term ``V(x)``."""
        x = np.asarray(x, dtype=float)
        if self.id == "potential-double-well":
            return np.exp(-np.abs(x))
        if self.id == "control-eikonal":
            return -np.exp(-np.abs(x))
        return np.zeros_like(x)

    def __call__(self, x, p):
        return self.scale(x) * self.kernel(p) + self.potential(x)

    def satisfies(self, assumption: str) -> bool:
        return assumption in self.assumptions

    def value_bound_on(self, x_max: float) -> float:
        """Sup-norm bound for solutions on ``[-x_max, x_max]``.

        Only differs from ``value_bound`` for the scaled double well, whose
        solutions grow with the domain because H1 fails.
        """
        if self.id == "scaled-double-well":
            return (1.0 + abs(x_max)) / self.m
        return self.value_bound

    @property
    def lagrangian_kinks(self) -> tuple[float, ...]:
        """Velocities where the closed-form Lagrangian is not differentiable."""
        if self.id in _CONVEX:
            return (-1.0, 1.0)
        return ()

    @property
    def has_closed_form_lagrangian(self) -> bool:
        return self.id in _CONVEX


def eval_hamiltonian(spec: HamiltonianSpec, x, p):
    """Evaluate ``H(x, p)``; broadcasts over array arguments."""
    return spec(x, p)


def _make(id, *, convex, value_bound, gradient_bound, assumptions, **params):
    spec = HamiltonianSpec(
        id=id,
        is_convex_in_p=convex,
        value_bound=value_bound,
        gradient_bound=gradient_bound,
        velocity_bound=1.0 if convex else math.inf,
        assumptions=frozenset(assumptions),
        **params,
    )
    x_max = 0.0 if id == "scaled-double-well" else None
    lip = lipschitz_bound(spec, gradient_bound, x_max=x_max)
    return replace(spec, lipschitz_p=lip)


_ALL = ("H1", "H2", "H3b", "H3c", "H4")


def capped_cone(alpha: float = 1.0, beta: float = 1.0) -> HamiltonianSpec:
    """``-alpha|p|`` on ``|p| <= beta``, continued by ``alpha(|p| - 2 beta)``."""
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    return _make(
        "capped-cone", convex=False, value_bound=alpha * beta,
        gradient_bound=3.0 * beta, assumptions=_ALL, alpha=float(alpha), beta=float(beta),
    )


def holder_cone(gamma: float = 0.5) -> HamiltonianSpec:
    """``-|p|^gamma`` on ``|p| <= 1``, continued by ``|p| - 2``."""
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    return _make(
        "holder-cone", convex=False, value_bound=1.0, gradient_bound=3.0,
        assumptions=("H1", "H2", "H3b", "H4"), gamma=float(gamma),
    )


def shifted_eikonal() -> HamiltonianSpec:
    """``|p - 1| - 1`` on the whole line (convex)."""
    return _make(
        "shifted-eikonal", convex=True, value_bound=1.0, gradient_bound=3.0,
        assumptions=_ALL + ("H5",),
    )


def double_well() -> HamiltonianSpec:
    return _make(
        "double-well", convex=False, value_bound=1.0, gradient_bound=3.0, assumptions=_ALL
    )


def scaled_double_well(m: float = 2.0) -> HamiltonianSpec:
    """``((1 + |x|)/m) K(p)``; violates H1, so ``value_bound`` is the value at x=0."""
    if m <= 1.0:
        raise ValueError("m must exceed 1")
    return _make(
        "scaled-double-well", convex=False, value_bound=1.0 / m, gradient_bound=3.0,
        assumptions=("H2", "H3b", "H3c", "H4"), m=float(m),
    )


def potential_double_well() -> HamiltonianSpec:
    return _make(
        "potential-double-well", convex=False, value_bound=1.0, gradient_bound=3.0,
        assumptions=_ALL,
    )


def control_eikonal() -> HamiltonianSpec:
    """``|p| - exp(-|x|)``: the Hamiltonian of ``y' = a``, ``a in [-1, 1]``."""
    return _make(
        "control-eikonal", convex=True, value_bound=1.0, gradient_bound=2.0,
        assumptions=_ALL + ("H5",),
    )


def pure_eikonal() -> HamiltonianSpec:
    return _make(
        "pure-eikonal", convex=True, value_bound=1.0, gradient_bound=1.0,
        assumptions=_ALL + ("H5",),
    )


def get_hamiltonian(name: str, alpha: float = 1.0, beta: float = 1.0,
                    gamma: float = 0.5, m: float = 2.0) -> HamiltonianSpec:
    """Look up a catalog entry by its string id.

    Parameters that do not apply to the chosen entry are ignored.
    """
    name = name.strip().lower().replace("_", "-")
    if name == "capped-cone":
        return capped_cone(alpha, beta)
    if name == "holder-cone":
        return holder_cone(gamma)
    if name == "scaled-double-well":
        return scaled_double_well(m)
    simple = {
        "shifted-eikonal": shifted_eikonal,
        "double-well": double_well,
        "potential-double-well": potential_double_well,
        "control-eikonal": control_eikonal,
        "pure-eikonal": pure_eikonal,
    }
    if name not in simple:
        raise UnknownExample(f"unknown Hamiltonian {name!r}; expected one of {CATALOG_IDS}")
    return simple[name]()


def lipschitz_bound(spec: HamiltonianSpec, p_max: float, *, x_max: float | None = None,
                    p_min: float | None = None) -> float:
    """Upper bound on ``|dH/dp|`` over ``|p| <= p_max``.

    ``x_max`` is required for the scaled double well, whose slope grows with
    ``|x|``.  For the Hölder cone the slope is unbounded at ``p = 0``: without
    ``p_min`` the slope away from the cusp (1) is returned, with ``p_min`` the
    bound over ``p_min <= |p| <= p_max``.
    """
    if p_max <= 0:
        raise ValueError("p_max must be positive")
    if spec.id == "capped-cone":
        return spec.alpha
    if spec.id == "holder-cone":
        if p_min is None or p_min >= 1.0:
            return 1.0
        return max(spec.gamma * p_min ** (spec.gamma - 1.0), 1.0)
    if spec.id == "scaled-double-well":
        if x_max is None:
            raise ValueError("scaled-double-well needs x_max for a Lipschitz bound")
        return (1.0 + abs(x_max)) / spec.m
    return 1.0


def legendre_transform(spec: HamiltonianSpec, x, v, p_max: float | None = None,
                       n_samples: int = 4001, closed_form: bool = True):
    """Convex conjugate ``L(x, v) = sup_p (p v - H(x, p))``.

    Uses the registered closed form when available (and ``closed_form`` is
    true); otherwise takes the maximum over ``n_samples`` equispaced momenta in
    ``[-p_max, p_max]``.  Values outside the effective domain are reported as
    ``LAGRANGIAN_SENTINEL``.
    """
    if not spec.is_convex_in_p:
        raise NonconvexHamiltonian(f"{spec.id} is not convex in p")
    if p_max is None:
        p_max = 2.0 * spec.gradient_bound
    if p_max < spec.gradient_bound:
        raise ValueError("p_max must be at least the gradient bound")
    if n_samples < 3:
        raise ValueError("n_samples must be at least 3")
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if closed_form and spec.has_closed_form_lagrangian:
        inside = np.abs(v) <= 1.0 + 1e-12
        if spec.id == "control-eikonal":
            val = np.exp(-np.abs(x)) + 0.0 * v
        elif spec.id == "shifted-eikonal":
            val = v + 1.0 + 0.0 * x
        else:
            val = np.zeros(np.broadcast(x, v).shape)
        out = np.where(inside, val, LAGRANGIAN_SENTINEL)
        return out if out.ndim else float(out)
    p = np.linspace(-p_max, p_max, n_samples)
    xb, vb = np.broadcast_arrays(x, v)
    out = np.max(vb[..., None] * p - spec(xb[..., None], p), axis=-1)
    return out if out.ndim else float(out)
