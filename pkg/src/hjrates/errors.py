"""Exception types raised across the package."""

from __future__ import annotations


class HJError(Exception):
    """Base class for all package errors."""


class ConfigError(HJError, ValueError):
    """Invalid experiment or CLI configuration."""


class InvalidIndex(ConfigError):
    """Domain family index outside the admissible range."""


class InvalidGrid(ConfigError):
    pass


class RegionTooLarge(ConfigError):
    pass


class UnknownExample(ConfigError):
    pass


class OutsideDomain(HJError, ValueError):
    pass


class DegenerateData(HJError, ValueError):
    """Too few or nonpositive data points for a rate fit."""


class NonconvexHamiltonian(HJError, ValueError):
    pass


class NonCoercive(HJError, RuntimeError):
    """Solver iterates left the a-priori bound, which signals a non-coercive H."""


class MomentumUndefined(HJError, ValueError):
    pass


class NotConverged(HJError, RuntimeError):
    """Iteration budget exhausted before reaching the residual tolerance.

    The last iterate and its report are attached so callers can still
    inspect or record the partial result.
    """

    def __init__(self, message, solution=None, report=None):
        super().__init__(message)
        self.solution = solution
        self.report = report
