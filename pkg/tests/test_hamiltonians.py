import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hjrates.errors import NonconvexHamiltonian, UnknownExample
from hjrates.hamiltonians import (
    CATALOG_IDS,
    LAGRANGIAN_SENTINEL,
    capped_cone,
    control_eikonal,
    double_well,
    eval_hamiltonian,
    get_hamiltonian,
    holder_cone,
    legendre_transform,
    lipschitz_bound,
    pure_eikonal,
    scaled_double_well,
    shifted_eikonal,
)

ALL = [get_hamiltonian(name) for name in CATALOG_IDS]
finite = st.floats(-5, 5, allow_nan=False)


def test_capped_cone_values():
    h = capped_cone(1.0, 1.0)
    assert eval_hamiltonian(h, 0.0, 0.5) == pytest.approx(-0.5)
    assert eval_hamiltonian(h, 3.0, 3.0) == pytest.approx(1.0)
    assert eval_hamiltonian(h, 0.0, 1.0) == pytest.approx(-1.0)


def test_holder_cone_values():
    h = holder_cone(0.5)
    assert h(0.0, 0.25) == pytest.approx(-0.5)
    assert h(0.0, 3.0) == pytest.approx(1.0)


def test_convex_entries():
    assert control_eikonal()(0.0, 0.0) == pytest.approx(-1.0)
    assert control_eikonal()(1.0, 2.0) == pytest.approx(2.0 - math.exp(-1.0))
    assert shifted_eikonal()(0.0, 1.0) == pytest.approx(-1.0)
    assert pure_eikonal()(7.0, -2.0) == 2.0


def test_scaled_double_well_grows_with_x():
    h = scaled_double_well(2.0)
    assert h(0.0, 3.0) == pytest.approx(0.5)
    assert h(3.0, 3.0) == pytest.approx(2.0)
    assert h.value_bound_on(3.0) == pytest.approx(2.0)


def test_lookup_and_unknown():
    assert get_hamiltonian("Capped_Cone", alpha=2.0).alpha == 2.0
    with pytest.raises(UnknownExample):
        get_hamiltonian("no-such-thing")


def test_parameter_ranges():
    with pytest.raises(ValueError):
        capped_cone(0.0, 1.0)
    with pytest.raises(ValueError):
        holder_cone(1.0)
    with pytest.raises(ValueError):
        scaled_double_well(1.0)


def test_assumption_flags():
    assert not holder_cone().satisfies("H3c")
    assert not scaled_double_well().satisfies("H1")
    assert double_well().satisfies("H1") and double_well().satisfies("H3c")
    assert control_eikonal().satisfies("H5")


@pytest.mark.parametrize("spec", ALL, ids=lambda s: s.id)
@given(x=finite, p=finite)
def test_even_in_x(spec, x, p):
    assert spec(x, p) == pytest.approx(spec(-x, p))


@pytest.mark.parametrize("spec", ALL, ids=lambda s: s.id)
@given(x=finite)
def test_coercive(spec, x):
    # the catalog grows at least linearly once |p| passes the gradient bound
    big = 2.0 * spec.gradient_bound + 10.0
    assert spec(x, big) > spec(x, spec.gradient_bound)
    assert spec(x, -big) > spec(x, -spec.gradient_bound) or spec.id == "shifted-eikonal"


@pytest.mark.parametrize("spec", [s for s in ALL if s.id != "holder-cone"], ids=lambda s: s.id)
@given(x=finite, p=st.floats(-3, 3), q=st.floats(-3, 3))
def test_lipschitz_bound_is_valid(spec, x, p, q):
    lip = lipschitz_bound(spec, 3.0, x_max=abs(x))
    assert abs(spec(x, p) - spec(x, q)) <= lip * abs(p - q) + 1e-12


@given(p=st.floats(0.05, 3), q=st.floats(0.05, 3))
def test_holder_bound_with_hint(p, q):
    spec = holder_cone(0.5)
    lip = lipschitz_bound(spec, 3.0, p_min=0.05)
    assert abs(spec(0.0, p) - spec(0.0, q)) <= lip * abs(p - q) + 1e-12


def test_lipschitz_bound_errors():
    with pytest.raises(ValueError):
        lipschitz_bound(pure_eikonal(), 0.0)
    with pytest.raises(ValueError):
        lipschitz_bound(scaled_double_well(), 1.0)


@pytest.mark.parametrize("spec", [s for s in ALL if s.is_convex_in_p], ids=lambda s: s.id)
@given(x=finite, p=st.floats(-3, 3), t=st.floats(0, 1))
def test_convexity(spec, x, p, t):
    q = -p / 2 + 1
    mid = spec(x, t * p + (1 - t) * q)
    assert mid <= t * spec(x, p) + (1 - t) * spec(x, q) + 1e-12


def test_legendre_closed_forms():
    assert legendre_transform(control_eikonal(), 0.0, 0.5) == pytest.approx(1.0)
    assert legendre_transform(shifted_eikonal(), 0.0, -0.5) == pytest.approx(0.5)
    assert legendre_transform(pure_eikonal(), 3.0, 1.0) == 0.0
    assert legendre_transform(pure_eikonal(), 3.0, 1.5) == LAGRANGIAN_SENTINEL


@pytest.mark.parametrize("spec", [s for s in ALL if s.is_convex_in_p], ids=lambda s: s.id)
def test_legendre_numeric_matches_closed_form(spec):
    x = np.linspace(-2, 2, 5)[:, None]
    v = np.linspace(-1, 1, 41)[None, :]
    exact = legendre_transform(spec, x, v)
    numeric = legendre_transform(spec, x, v, p_max=20.0, n_samples=40001, closed_form=False)
    assert np.max(np.abs(exact - numeric)) < 1e-9


@given(x=finite, v=st.floats(-1, 1), p=st.floats(-6, 6))
def test_fenchel_young(x, v, p):
    spec = control_eikonal()
    assert legendre_transform(spec, x, v) + spec(x, p) >= p * v - 1e-12


def test_legendre_rejects_nonconvex_and_bad_args():
    with pytest.raises(NonconvexHamiltonian):
        legendre_transform(double_well(), 0.0, 0.0)
    with pytest.raises(ValueError):
        legendre_transform(pure_eikonal(), 0.0, 0.0, p_max=0.5)
    with pytest.raises(ValueError):
        legendre_transform(pure_eikonal(), 0.0, 0.0, n_samples=2, closed_form=False)
