import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdmsqueeze import catalog as cat
from pdmsqueeze.errors import FlowEscape
from pdmsqueeze.fields import affine, constant, exponential, power
from pdmsqueeze.flow import Direction, F_oracle, f_oracle, flow_map, integrate


def test_exponential_flow_matches_closed_form():
    x = np.linspace(-6, 2 * math.log(1.8), 40)
    g = exponential(1.0, 0.5)
    assert np.max(np.abs(f_oracle(g, x) - cat.f_closed(1.0, 0.5).eval(x))) <= 1e-9
    assert np.max(np.abs(F_oracle(g, x) - cat.F_closed(1.0, 0.5).eval(x))) <= 1e-9


def test_origin_value_2ln2():
    assert float(f_oracle(exponential(1.0, 0.5), 0.0)) == pytest.approx(2 * math.log(2), abs=1e-12)


@given(st.floats(-1.0, 1.0), st.floats(-4, 4))
def test_linear_flow_is_exponential_scaling(c, x0):
    assert float(f_oracle(affine(c), x0)) == pytest.approx((math.exp(c) - 1) * x0, abs=1e-11)
    assert float(F_oracle(affine(c), x0)) == pytest.approx((math.exp(-c) - 1) * x0, abs=1e-11)


def test_constant_flow_translates():
    r = flow_map(constant(0.25), np.array([-1.0, 3.0]))
    assert np.allclose(r.x1 - r.x0, 0.25, atol=1e-15)
    assert np.allclose(r.jacobian, 1.0)


@settings(max_examples=20)
@given(st.floats(-5, 0.5))
def test_forward_then_backward_is_identity(x0):
    g = exponential(1.0, 0.5)
    y = flow_map(g, x0).x1
    assert float(flow_map(g, y, Direction.BACKWARD).x1) == pytest.approx(x0, abs=1e-10)


def test_jacobians_relate_to_momentum_weight():
    # forward: d(x+f)/dx = 1/(1-w); backward: d(x+F)/dx = 1/(1+w) = 1/G
    a, b = 1.0, 0.5
    g = exponential(a, b)
    x = np.linspace(-4, 0.5, 10)
    w = a * b * np.exp(b * x)
    fwd = flow_map(g, x, Direction.FORWARD)
    bwd = flow_map(g, x, Direction.BACKWARD)
    assert np.allclose(fwd.jacobian, 1 / (1 - w), rtol=1e-9)
    assert np.allclose(bwd.jacobian, 1 / cat.G_closed(a, b).eval(x), rtol=1e-12)


def test_richardson_error_estimate_is_small():
    r = flow_map(exponential(1.0, 0.5), np.array([0.0]))
    assert r.est_error[0] < 1e-9
    assert r.steps_used == 3 * 256


def test_finite_time_blowup_raises():
    # dx/ds = x^2 from x0 = 2 blows up at s = 1/2
    with pytest.raises(FlowEscape) as err:
        integrate(power(affine(1.0), 2.0), np.array([2.0]), 1.0, 256)
    assert 0 < err.value.escape_time <= 0.55


def test_leaving_field_domain_raises():
    g = exponential(1.0, 1.0).restrict(-np.inf, 0.5)
    with pytest.raises(FlowEscape):
        f_oracle(g, np.array([0.0]))
