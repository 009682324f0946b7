"""Decay-model fits for error-versus-k data and checks against rate bounds.

Two shapes are fitted by unweighted least squares in log space:

* ``PowerLaw``     ``e ~ C (k + s)^-p``  (``s`` is an index shift, 0 by default)
* ``Exponential``  ``e ~ C exp(-r k)``

Closed-form errors are often exact power laws only in a shifted index (for
example ``1/(k + 1)``), and a plain log-log fit over a short range of ``k``
then underestimates ``p`` by several percent.  ``offset="auto"`` profiles the
shift out, choosing the ``s`` that minimises the log-space residual.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DegenerateData

POWER_LAW = "PowerLaw"
EXPONENTIAL = "Exponential"

# a bound "holds" when the per-point constants stop growing: their log-log
# slope over the last pair of k values must not exceed this
TAIL_SLOPE_LIMIT = 0.1


@dataclass(frozen=True)
class RateFit:
    model: str
    amplitude: float
    exponent: float
    rms_log_residual: float
    offset: float = 0.0

    def predict(self, k):
        k = np.asarray(k, dtype=float)
        if self.model == POWER_LAW:
            return self.amplitude * (k + self.offset) ** (-self.exponent)
        return self.amplitude * np.exp(-self.exponent * k)


class Theorem(enum.Enum):
    T11 = "T11"  # C (1 + R^2) / k^2
    T12 = "T12"  # C e^{R/C} e^{-k/C}
    T14 = "T14"  # same shape as T12, convex case
    T15 = "T15"  # C / k
    P44 = "P44"  # C k^{-gamma/(1-gamma)}


def _clean(ks, errors) -> tuple[np.ndarray, np.ndarray]:
    ks = np.asarray(ks, dtype=float).ravel()
    errors = np.asarray(errors, dtype=float).ravel()
    if ks.shape != errors.shape:
        raise DegenerateData("ks and errors differ in length")
    if np.unique(ks).size < 3:
        raise DegenerateData("need at least 3 distinct k values")
    if not np.all(np.isfinite(errors)) or np.any(errors <= 0):
        raise DegenerateData("errors must be finite and positive")
    return ks, errors


def _linear_fit(t: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Slope, intercept and rms residual of ``y ~ slope t + intercept``."""
    A = np.column_stack([t, np.ones_like(t)])
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    rms = float(np.sqrt(np.mean((A @ [slope, icpt] - y) ** 2)))
    return float(slope), float(icpt), rms


def _power_fit_at(ks, y, s):
    slope, icpt, rms = _linear_fit(np.log(ks + s), y)
    return RateFit(POWER_LAW, math.exp(icpt), -slope, rms, float(s))


def fit_power_law(ks, errors, offset: float | str = 0.0) -> RateFit:
    """Fit ``errors ~ C (k + offset)^-p``.

    ``offset="auto"`` picks the shift in ``(-0.9 min k, 4 max k)`` that best
    linearises the data.

    >>> fit = fit_power_law([2, 4, 8], [0.5, 0.25, 0.125])
    >>> round(fit.exponent, 12), round(fit.amplitude, 12)
    (1.0, 1.0)
    """
    ks, errors = _clean(ks, errors)
    y = np.log(errors)
    if offset != "auto":
        s = float(offset)
        if np.any(ks + s <= 0):
            raise DegenerateData("k + offset must be positive")
        return _power_fit_at(ks, y, s)
    lo, hi = -0.9 * ks.min(), 4.0 * ks.max()
    res = minimize_scalar(
        lambda s: _power_fit_at(ks, y, s).rms_log_residual,
        bounds=(lo, hi), method="bounded", options={"xatol": 1e-10},
    )
    best = _power_fit_at(ks, y, res.x)
    plain = _power_fit_at(ks, y, 0.0)
    return plain if plain.rms_log_residual <= best.rms_log_residual else best


def fit_exponential(ks, errors) -> RateFit:
    """Fit ``errors ~ C exp(-r k)``; ``exponent`` is the rate ``r``."""
    ks, errors = _clean(ks, errors)
    slope, icpt, rms = _linear_fit(ks, np.log(errors))
    return RateFit(EXPONENTIAL, math.exp(icpt), -slope, rms)


def classify_rate(ks, errors, tie_tol: float = 1e-12) -> tuple[RateFit, str]:
    """Fit both shapes and keep the one with the smaller log residual.

    With only three points a shifted power law interpolates anything, so the
    shift is profiled out only when at least four points are given.
    """
    ks, errors = _clean(ks, errors)
    if ks.max() < 4 * ks.min():
        raise DegenerateData("ks must span at least a factor of 4")
    power = fit_power_law(ks, errors, offset="auto" if ks.size >= 4 else 0.0)
    expo = fit_exponential(ks, errors)
    if expo.rms_log_residual < power.rms_log_residual - tie_tol:
        return expo, EXPONENTIAL
    return power, POWER_LAW


def drop_below_floor(ks, errors, floor: float, factor: float = 10.0):
    """Keep only points whose error is at least ``factor * floor``."""
    ks = np.asarray(ks, dtype=float)
    errors = np.asarray(errors, dtype=float)
    keep = errors >= factor * floor
    return ks[keep], errors[keep]


def _exp_shape_constant(k: float, e: float, R: float) -> float:
    """Smallest ``C`` with ``C exp((R - k)/C) >= e`` (needs ``k > R``)."""
    a = k - R
    # log c - a/c is strictly increasing, so bracket by doubling and halving
    f = lambda c: math.log(c) - a / c - math.log(e)  # noqa: E731
    lo = hi = a
    while f(hi) < 0:
        hi *= 2.0
    while f(lo) > 0:
        lo *= 0.5
    return brentq(f, lo, hi, xtol=1e-15, rtol=1e-14)


def per_point_constants(theorem: Theorem, ks, errors, R: float, gamma: float | None = None):
    """The smallest constant making the bound shape dominate each point."""
    theorem = Theorem(theorem)
    ks = np.asarray(ks, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if theorem is Theorem.T11:
        return ks, errors * ks**2 / (1.0 + R**2)
    if theorem is Theorem.T15:
        return ks, errors * ks
    if theorem is Theorem.P44:
        if gamma is None or not 0 < gamma < 1:
            raise ValueError("P44 needs gamma in (0, 1)")
        return ks, errors * ks ** (gamma / (1.0 - gamma))
    # exponential shapes only constrain C once k exceeds R
    use = ks > R
    if not np.any(use):
        raise DegenerateData("exponential bounds need some k > R")
    ks = ks[use]
    return ks, np.array([_exp_shape_constant(k, e, R) for k, e in zip(ks, errors[use])])


def verify_theorem_bound(theorem, ks, errors, R: float, gamma: float | None = None,
                         error_floor: float = 0.0) -> tuple[bool, float]:
    """Fit the minimal dominating constant of a rate bound.

    Returns ``(holds, C)``.  ``holds`` requires ``C`` finite and the per-point
    constants not to keep growing over the last two ``k`` values (a bound of
    the wrong shape shows up as constants that increase without limit).
    Points below ``10 * error_floor`` are discarded first.
    """
    ks, errors = _clean(ks, errors)
    if error_floor > 0:
        ks, errors = drop_below_floor(ks, errors, error_floor)
        if ks.size < 3:
            raise DegenerateData("fewer than 3 points above the error floor")
    order = np.argsort(ks)
    kk, cs = per_point_constants(theorem, ks[order], errors[order], R, gamma)
    C = float(np.max(cs))
    if not math.isfinite(C):
        return False, C
    if kk.size >= 2:
        slope = math.log(cs[-1] / cs[-2]) / math.log(kk[-1] / kk[-2])
    else:
        slope = 0.0
    return bool(slope <= TAIL_SLOPE_LIMIT), C
