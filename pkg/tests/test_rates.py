import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hjrates.errors import DegenerateData
from hjrates.oracles import OracleId, exact_error
from hjrates.rates import (
    EXPONENTIAL,
    POWER_LAW,
    Theorem,
    classify_rate,
    drop_below_floor,
    fit_exponential,
    fit_power_law,
    verify_theorem_bound,
)


def test_exact_power_law():
    fit = fit_power_law([2, 4, 8], [0.5, 0.25, 0.125])
    assert fit.model == POWER_LAW
    assert fit.exponent == pytest.approx(1.0, abs=1e-12)
    assert fit.amplitude == pytest.approx(1.0, abs=1e-12)
    assert fit.rms_log_residual < 1e-12


def test_exact_exponential():
    fit = fit_exponential([1, 2, 3], np.exp([-2.0, -4.0, -6.0]))
    assert fit.model == EXPONENTIAL
    assert fit.exponent == pytest.approx(2.0, abs=1e-12)
    assert fit.rms_log_residual < 1e-12


def test_p2_power_law():
    ks = [2, 4, 8, 16]
    errs = [exact_error(OracleId("p2-shifted-eikonal"), k, 1 - 1 / k) for k in ks]
    assert 0.95 <= fit_power_law(ks, errs, offset="auto").exponent <= 1.05


def test_scaled_three_points():
    ks = [2, 3, 4]
    errs = [exact_error(OracleId("scaled-double-well", m=3.0), k, 1.0) for k in ks]
    assert fit_power_law(ks, errs, offset="auto").exponent == pytest.approx(2.0, abs=1e-6)


def test_control_and_capped_rates():
    ks = np.arange(1, 6)
    errs = [exact_error(OracleId("control-eikonal"), k, 0.0) for k in ks]
    assert fit_exponential(ks, errs).exponent == pytest.approx(2.0, abs=1e-9)
    errs = [exact_error(OracleId("capped-cone", alpha=2.0), k, 0.0) for k in (2, 4, 6)]
    assert fit_exponential([2, 4, 6], errs).exponent == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("ks,errs", [([1, 2], [1, 1]), ([1, 1, 1], [1, 2, 3]), ([1, 2, 3], [1, 0, 1]),
                                     ([1, 2, 3], [1, -1, 1]), ([1, 2, 3], [1, 2])])
def test_degenerate(ks, errs):
    with pytest.raises(DegenerateData):
        fit_power_law(ks, errs)
    with pytest.raises(DegenerateData):
        fit_exponential(ks, errs)


@given(C=st.floats(0.01, 100), p=st.floats(0.1, 4), lam=st.floats(1e-3, 1e3))
def test_power_recovery_and_scale_equivariance(C, p, lam):
    ks = np.array([2.0, 3.0, 5.0, 9.0])
    errs = C * ks**-p
    fit = fit_power_law(ks, errs)
    assert fit.exponent == pytest.approx(p, rel=1e-9)
    assert fit.amplitude == pytest.approx(C, rel=1e-9)
    scaled = fit_power_law(ks, lam * errs)
    assert scaled.exponent == pytest.approx(fit.exponent, rel=1e-9)
    assert scaled.amplitude == pytest.approx(lam * fit.amplitude, rel=1e-9)


@given(C=st.floats(0.01, 100), r=st.floats(0.1, 3), lam=st.floats(1e-3, 1e3))
def test_exponential_recovery_and_scale_equivariance(C, r, lam):
    ks = np.arange(1.0, 6.0)
    errs = C * np.exp(-r * ks)
    fit = fit_exponential(ks, errs)
    assert fit.exponent == pytest.approx(r, rel=1e-9)
    assert fit.amplitude == pytest.approx(C, rel=1e-9)
    assert fit_exponential(ks, lam * errs).amplitude == pytest.approx(lam * C, rel=1e-9)


def test_auto_offset_recovers_shift():
    ks = np.array([2.0, 4.0, 8.0, 16.0])
    fit = fit_power_law(ks, 3.0 * (ks + 1.0) ** -1.5, offset="auto")
    assert fit.exponent == pytest.approx(1.5, abs=1e-6)
    assert fit.offset == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(DegenerateData):
        fit_power_law(ks, ks**-1.0, offset=-3.0)


def test_classify():
    ks = np.arange(1, 7)
    assert classify_rate(ks, np.exp(-2.0 * ks))[1] == EXPONENTIAL
    assert classify_rate(ks, 1.0 / ks)[1] == POWER_LAW
    hk = np.array([2, 4, 8, 16, 32])
    fit, model = classify_rate(hk, [exact_error(OracleId("holder-cone"), k, 0.0) for k in hk])
    assert model == POWER_LAW and abs(fit.exponent - 1.0) <= 0.05
    with pytest.raises(DegenerateData):
        classify_rate([1, 2, 3], [1.0, 0.5, 0.25])


def test_theorem_examples():
    ks = np.array([2, 4, 8, 16])
    errs = [exact_error(OracleId("p2-shifted-eikonal"), k, 1 - 1 / k) for k in ks]
    holds, c = verify_theorem_bound(Theorem.T15, ks, errs, R=1.0)
    assert holds and c <= 2.0

    ks = np.arange(2, 8)
    errs = [exact_error(OracleId("capped-cone"), k, 1.0) for k in ks]
    holds, c = verify_theorem_bound("T12", ks, errs, R=1.0)
    assert holds and c == pytest.approx(1.0, abs=1e-9)

    ks = np.arange(1, 7)
    holds, c = verify_theorem_bound("T11", ks, [exact_error(OracleId("control-eikonal"), k, 0.0) for k in ks], 0.0)
    assert holds and math.isfinite(c) and c < 1.0


def test_theorem_rejects_wrong_shape():
    ks = np.array([2.0, 4.0, 8.0, 16.0, 32.0])
    assert not verify_theorem_bound("T12", ks, 1.0 / ks, 0.0)[0]
    assert not verify_theorem_bound("T11", ks, 1.0 / ks, 0.0)[0]
    assert verify_theorem_bound("P44", ks, 1.0 / ks, 0.0, gamma=0.5)[0]
    with pytest.raises(ValueError):
        verify_theorem_bound("P44", ks, 1.0 / ks, 0.0)


def test_error_floor():
    ks, errs = drop_below_floor([1, 2, 3, 4], [1e-1, 1e-2, 1e-3, 1e-4], 1e-4)
    assert list(ks) == [1, 2, 3]
    with pytest.raises(DegenerateData):
        verify_theorem_bound("T14", [1, 2, 3, 4], [1e-1, 1e-2, 1e-3, 1e-4], 0.0, error_floor=1e-3)
