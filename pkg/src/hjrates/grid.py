"""Nested interval families, uniform grids and grid functions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidGrid, InvalidIndex, RegionTooLarge

PROTOTYPES = ("p1", "p2")

# closed-region membership slack, so that a node sitting at |x| = R is kept
REGION_EPS = 1e-12


def _normalise_prototype(prototype) -> str:
    key = str(prototype).strip().lower()
    if key not in PROTOTYPES:
        raise InvalidIndex(f"unknown prototype {prototype!r}")
    return key


def build_domain(prototype, k: int) -> tuple[float, float]:
    """Interval of index ``k`` in the growing (p1) or saturating (p2) family.

    >>> build_domain("p1", 3)
    (-3.0, 3.0)
    >>> build_domain("p2", 2)
    (-0.5, 0.5)
    """
    prototype = _normalise_prototype(prototype)
    if int(k) != k:
        raise InvalidIndex(f"k must be an integer, got {k!r}")
    k = int(k)
    if prototype == "p1":
        if k < 1:
            raise InvalidIndex("p1 requires k >= 1")
        r = float(k)
    else:
        if k < 2:
            raise InvalidIndex("p2 requires k >= 2")
        r = 1.0 - 1.0 / k
    return (-r, r)


@dataclass(frozen=True)
class Grid1D:
    a: float
    b: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or not self.a < self.b:
            raise InvalidGrid(f"need a < b, got a={self.a}, b={self.b}")
        if int(self.n) != self.n or self.n < 3:
            raise InvalidGrid(f"need an integer n >= 3, got {self.n}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        x = self.a + self.h * np.arange(self.n)
        x[-1] = self.b
        x.setflags(write=False)
        return x


def build_grid(a: float, b: float, n: int) -> Grid1D:
    return Grid1D(float(a), float(b), n)


def grid_for_domain(prototype, k: int, h: float) -> Grid1D:
    """Uniform grid on the ``k``-th interval with spacing close to ``h``.

    The node count is rounded to an odd number so that ``x = 0`` is a node.
    """
    if h <= 0:
        raise InvalidGrid("h must be positive")
    a, b = build_domain(prototype, k)
    n = int(round((b - a) / h)) + 1
    if n % 2 == 0:
        n += 1
    return build_grid(a, b, max(n, 3))


@dataclass(frozen=True)
class GridFunction:
    """Node values on a grid; calling it interpolates linearly."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise InvalidGrid(f"expected {self.grid.n} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidGrid("grid function values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def __call__(self, x):
        return np.interp(x, self.grid.nodes, self.values)


def region_mask(grid: Grid1D, R: float) -> np.ndarray:
    return np.abs(grid.nodes) <= R + REGION_EPS


def sup_error_on_region(f: GridFunction, g_eval, R: float) -> float:
    """Largest ``|f - g|`` over the nodes with ``|x| <= R``.

    ``g_eval`` is any vectorised callable (an oracle, or another
    ``GridFunction``, which is then linearly interpolated).
    """
    grid = f.grid
    if R < 0 or R > min(abs(grid.a), abs(grid.b)) + REGION_EPS:
        raise RegionTooLarge(f"R={R} exceeds the grid extent [{grid.a}, {grid.b}]")
    mask = region_mask(grid, R)
    x = grid.nodes[mask]
    return float(np.max(np.abs(f.values[mask] - np.asarray(g_eval(x), dtype=float))))
