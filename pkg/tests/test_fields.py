import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pdmsqueeze import _jet
from pdmsqueeze.errors import DomainError, UnsupportedOrder
from pdmsqueeze.fields import (
    GridSpec, affine, constant, derivative, exp, exponential, from_callable, identity, log, power, sample,
)

finite = st.floats(-3, 3, allow_nan=False)


def test_grid_nodes_exclude_walls():
    g = GridSpec(0.0, 1.0, 9)
    assert g.h == pytest.approx(0.1)
    assert np.allclose(g.nodes, np.arange(1, 10) / 10)
    assert g.half_nodes.size == 10
    assert np.allclose(g.half_nodes[[0, -1]], [0.05, 0.95])


def test_grid_refinement_nests_nodes():
    g = GridSpec(-1.0, 2.0, 29)
    r = g.refined(2)
    assert r.h == pytest.approx(g.h / 2)
    assert np.allclose(r.nodes[1::2], g.nodes)


@pytest.mark.parametrize("args", [(1.0, 0.0, 10), (0.0, 1.0, 2), (np.nan, 1.0, 10), (0.0, np.inf, 10)])
def test_grid_validation(args):
    with pytest.raises(ValueError):
        GridSpec(*args)


def test_exponential_jet_matches_closed_derivatives():
    f = exponential(2.0, 0.7)
    x = np.array([-1.0, 0.3, 2.0])
    j = f.jet(x, 4)
    for k in range(5):
        assert np.allclose(j[k] * math.factorial(k), 2.0 * 0.7**k * np.exp(0.7 * x), rtol=1e-14)


def test_arithmetic_and_composition_values():
    x = np.linspace(-2, 2, 9)
    f = (1.0 + exponential(1.0, 1.0)) / (2.0 + affine(1.0) * affine(1.0))
    assert np.allclose(f.eval(x), (1 + np.exp(x)) / (2 + x * x), rtol=1e-15)
    h = exp(affine(0.5)).compose(affine(2.0, 1.0))
    assert np.allclose(h.eval(x), np.exp(0.5 * (1 + 2 * x)), rtol=1e-15)
    assert np.allclose(log(2.0 + affine(1.0, 0.0)).eval(x + 3), np.log(5 + x), rtol=1e-15)
    assert np.allclose(power(3.0 + affine(1.0), -1.5).eval(x), (3 + x) ** -1.5, rtol=1e-14)


@given(finite)
def test_jet_derivatives_agree_with_independent_differences(x0):
    # oracle: 4th-order centred differences of the plain numpy expression
    fn = lambda x: np.exp(0.3 * x) / (1 + 0.5 * np.exp(0.3 * x)) ** 2
    field = exponential(1.0, 0.3) / power(1.0 + exponential(0.5, 0.3), 2.0)
    h = 1e-3
    d1 = (-fn(x0 + 2 * h) + 8 * fn(x0 + h) - 8 * fn(x0 - h) + fn(x0 - 2 * h)) / (12 * h)
    d2 = (-fn(x0 + 2 * h) + 16 * fn(x0 + h) - 30 * fn(x0) + 16 * fn(x0 - h) - fn(x0 - 2 * h)) / (12 * h * h)
    assert derivative(field, 1).eval(x0) == pytest.approx(d1, abs=1e-9)
    assert derivative(field, 2).eval(x0) == pytest.approx(d2, abs=1e-6)


@given(st.floats(0.1, 3), st.floats(-2, 2))
def test_log_exp_roundtrip_jets(c, x0):
    f = 1.0 + exponential(c, 0.5)
    g = exp(log(f))
    assert np.allclose(g.jet(np.array([x0]), 6), f.jet(np.array([x0]), 6), rtol=1e-12, atol=1e-14)


def test_jet_division_inverts_multiplication(rng):
    a = rng.standard_normal((7, 5))
    b = rng.standard_normal((7, 5))
    b[0] += 3.0
    assert np.allclose(_jet.div(_jet.mul(a, b), b), a, atol=1e-12)


def test_from_callable_uses_numerical_fallback():
    f = from_callable(np.sin, (np.cos,), name="sin")
    x = np.array([0.2, 1.1])
    assert np.allclose(derivative(f, 1).eval(x), np.cos(x), rtol=1e-14)
    d2 = derivative(f, 2)  # beyond the supplied derivatives: centred difference
    assert d2.max_order == 0
    assert np.allclose(d2.eval(x), -np.sin(x), atol=1e-6)
    with pytest.raises(UnsupportedOrder):
        f.jet(x, 2)


def test_forced_numerical_step():
    f = exponential(1.0, 1.0)
    d = derivative(f, 1, h_d=1e-4)
    assert d.eval(0.0) == pytest.approx(1.0, abs=1e-8)
    assert d.name.endswith("~")


@pytest.mark.parametrize("order", [0, 3])
def test_unsupported_derivative_order(order):
    with pytest.raises(UnsupportedOrder):
        derivative(identity(), order)


def test_domain_error_names_offending_point():
    f = log(affine(1.0)).restrict(0.0, np.inf)
    with pytest.raises(DomainError, match="-1"):
        f.eval(np.array([1.0, -1.0]))


@pytest.mark.filterwarnings("ignore:invalid value")
def test_nonfinite_value_is_domain_error():
    with pytest.raises(DomainError):
        log(affine(1.0)).eval(np.array([-1.0]))


def test_sample_on_grid():
    g = GridSpec(0.0, 1.0, 3)
    assert np.allclose(sample(constant(2.0), g), 2.0)
    assert np.allclose(sample(identity(), g), g.nodes)
