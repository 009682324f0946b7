import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hjrates.errors import OutsideDomain, UnknownExample
from hjrates.hamiltonians import capped_cone, double_well, shifted_eikonal
from hjrates.oracles import OracleId, exact_error, oracle_difference, oracle_for, oracle_limit, oracle_solution

TAGS = [
    OracleId("capped-cone"), OracleId("capped-cone", alpha=2.0, beta=0.5),
    OracleId("holder-cone", gamma=0.5), OracleId("holder-cone", gamma=1 / 3),
    OracleId("shifted-eikonal"), OracleId("control-eikonal"), OracleId("potential-double-well"),
    OracleId("scaled-double-well", m=2.0), OracleId("scaled-double-well", m=3.0),
    OracleId("p2-shifted-eikonal"),
]


def test_frozen_values():
    assert oracle_solution(OracleId("shifted-eikonal"), 7, 7.0) == 1.0
    assert oracle_solution(OracleId("capped-cone"), 2, 0.0) == pytest.approx(0.1353352832366127, abs=1e-15)
    assert oracle_solution(OracleId("holder-cone"), 3, 0.0) == pytest.approx(0.25, abs=1e-15)
    assert oracle_solution(OracleId("control-eikonal"), 1, 0.0) == pytest.approx(0.5676676416183064, abs=1e-15)
    assert oracle_limit(OracleId("control-eikonal"), 0.0) == 0.5
    assert oracle_limit(OracleId("capped-cone"), 12.3) == 0.0
    assert oracle_limit(OracleId("p2-shifted-eikonal"), 0.0) == pytest.approx(0.36787944117144233, abs=1e-15)


def test_frozen_errors():
    assert exact_error(OracleId("control-eikonal"), 2, 1.0) == pytest.approx(math.exp(-3) / 2, rel=1e-12)
    assert exact_error(OracleId("capped-cone"), 5, 0.0) == pytest.approx(0.006737946999085467, rel=1e-12)
    # e^{x-1}(e^{1/k}-1) is largest at x = R = 1/2, where it equals 1 - e^{-1/2}
    assert exact_error(OracleId("p2-shifted-eikonal"), 2, 0.5) == pytest.approx(1 - math.exp(-0.5), rel=1e-12)


def test_domain_errors():
    with pytest.raises(OutsideDomain):
        oracle_solution(OracleId("capped-cone"), 1, 1.5)
    with pytest.raises(OutsideDomain):
        oracle_limit(OracleId("p2-shifted-eikonal"), 1.2)
    with pytest.raises(OutsideDomain):
        exact_error(OracleId("control-eikonal"), 1, 2.0)
    with pytest.raises(UnknownExample):
        OracleId("double-well")


def test_pairing():
    assert oracle_for(shifted_eikonal(), "p2").tag == "p2-shifted-eikonal"
    assert oracle_for(capped_cone(2.0, 3.0)).alpha == 2.0
    assert oracle_for(double_well()) is None
    assert not OracleId("scaled-double-well").unique_limit


@pytest.mark.parametrize("oid", TAGS, ids=lambda o: f"{o.tag}")
@given(k=st.integers(2, 30), frac=st.floats(0, 1))
def test_nonnegative_and_decreasing(oid, k, frac):
    half = 1 - 1 / k if oid.prototype == "p2" else k
    x = np.linspace(-half, half, 101)
    assert np.all(oracle_solution(oid, k, x) - oracle_limit(oid, x) >= -1e-15)
    R = frac * (1 - 1 / k if oid.prototype == "p2" else 1.0)
    assert exact_error(oid, k + 1, R) < exact_error(oid, k, R)


@given(k=st.integers(1, 20), R=st.floats(0, 1))
def test_control_rate_identity(k, R):
    oid = OracleId("control-eikonal")
    ratio = exact_error(oid, k + 1, R) / exact_error(oid, k, R)
    assert ratio == pytest.approx(math.exp(-2), abs=1e-12)


@pytest.mark.parametrize("m", [2.0, 3.0, 2.5])
@given(k=st.integers(1, 50))
def test_scaled_rate_identity(m, k):
    oid = OracleId("scaled-double-well", m=m)
    ratio = exact_error(oid, k + 1, 1.0) / exact_error(oid, k, 1.0)
    assert ratio == pytest.approx(((2.0 + k) / (1.0 + k)) ** (1 - m), abs=1e-12)


def test_profiles_peak_at_region_edge():
    for oid in TAGS:
        k = 4
        R = 0.5 if oid.prototype == "p2" else 2.0
        edge = max(float(oracle_solution(oid, k, s * R) - oracle_limit(oid, s * R)) for s in (-1, 1))
        assert exact_error(oid, k, R) == pytest.approx(edge, rel=1e-12)


@pytest.mark.parametrize("oid", TAGS, ids=lambda o: f"{o.tag}")
def test_difference_matches_subtraction(oid):
    k = 3
    half = 1 - 1 / k if oid.prototype == "p2" else k
    x = np.linspace(-half, half, 51)
    direct = oracle_solution(oid, k, x) - oracle_limit(oid, x)
    np.testing.assert_allclose(oracle_difference(oid, k, x), direct, atol=1e-14)
