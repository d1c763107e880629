import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdmsqueeze import catalog as cat
from pdmsqueeze.errors import DivisionByGenerator, DomainError
from pdmsqueeze.fields import GridSpec, affine, constant, exponential, identity
from pdmsqueeze.flow import F_oracle, f_oracle
from pdmsqueeze.transform import (
    Convention, TransformSeries, evaluate_series, series_F, series_f, series_G, transformed_potential,
    v_tilde, verify_mass_consistency,
)


# G ------------------------------------------------------------------------------------


def test_G_terms_for_exponential_generator():
    a, b = 1.0, 0.5
    x = np.linspace(-4, 1, 7)
    terms = TransformSeries(exponential(a, b), K=5).terms("G", x)
    assert np.allclose(terms[0], 1.0)
    assert np.allclose(terms[1], -a * b * np.exp(b * x), rtol=1e-14)
    assert np.all(terms[2] == 0.0)


def test_G_exponential_terminates_exactly():
    ev = evaluate_series(exponential(1.0, 0.5), "G", np.linspace(-6, 3, 40), K=24, tol=1e-14)
    assert ev.terminated
    assert np.all(ev.converged_at == 2)
    assert np.allclose(ev.jet[0], 1 + 0.5 * np.exp(0.5 * np.linspace(-6, 3, 40)), rtol=1e-15)


def test_G_terminates_far_beyond_x_star():
    # rounding noise in the quotient must not be amplified by g^2
    x = np.linspace(-6, 8, 50)
    G = series_G(exponential(1.0, 1.0)).eval(x)
    assert np.allclose(G, 1 + np.exp(x), rtol=1e-14)


def test_G_constant_generator_is_one():
    assert np.allclose(series_G(constant(0.7)).eval(np.array([-2.0, 1.0])), 1.0)


@pytest.mark.parametrize("c", [0.3, -0.5, math.log(2) / 2])
def test_G_linear_generator_is_exp_plus_c(c):
    # independent oracle: G_k = (-c)^k for g = c x, so sum (-1)^k G_k / k! = e^{c}
    x = np.array([-2.0, 0.5, 3.0])
    assert np.allclose(series_G(affine(c), K=30).eval(x), math.exp(c), rtol=1e-14)


def test_G_raises_where_generator_vanishes():
    with pytest.raises(DivisionByGenerator):
        series_G(affine(1.0)).eval(np.array([0.0]))


def test_G_squared_times_mass_is_one():
    grid = GridSpec(-6, 4, 500)
    for a, b in [(1.0, 0.5), (0.1, 0.5), (1.0, 2.0)]:
        assert verify_mass_consistency(cat.mass_family(a, b), cat.generator_for_mass(a, b), grid) <= 1e-12


def test_constant_mass_consistency_needs_negative_slope():
    case = cat.ConstantMassCase(2.0)
    grid = GridSpec(0.5, 4, 50)  # g = c x must not vanish on the grid
    assert verify_mass_consistency(case.mass, case.mass_generator(), grid) <= 1e-12
    assert verify_mass_consistency(case.mass, case.squeeze_generator(), grid) > 0.5


# f and F -------------------------------------------------------------------------------


def test_f_exponential_at_origin_is_2ln2():
    assert series_f(exponential(1.0, 0.5), K=200).eval(0.0) == pytest.approx(2 * math.log(2), abs=1e-12)


def test_F_exponential_at_origin():
    # oracle: reversed characteristic flow
    F0 = series_F(exponential(1.0, 0.5), K=80).eval(0.0)
    assert F0 == pytest.approx(float(F_oracle(exponential(1.0, 0.5), 0.0)), abs=1e-12)
    assert F0 == pytest.approx(-2 * math.log(1.5), abs=1e-12)


def test_f_constant_generator_translates():
    x = np.array([-1.0, 0.0, 2.0])
    assert np.allclose(series_f(constant(0.4)).eval(x), 0.4)
    assert np.allclose(series_F(constant(0.4)).eval(x), -0.4)


def test_linear_generator_squeezes_by_sqrt_m0():
    g = affine(math.log(4.0) / 2)
    x = np.linspace(-3, 3, 13)
    assert np.allclose(x + series_f(g).eval(x), 2 * x, atol=1e-12)
    assert np.allclose(x + series_F(g).eval(x), x / 2, atol=1e-12)


@settings(max_examples=15)
@given(st.floats(0.05, 2.0), st.floats(0.2, 2.0), st.floats(0.05, 0.8))
def test_f_series_matches_closed_form(alpha, beta, w):
    # w = alpha beta e^{beta x} < 1 parametrises the admissible domain
    x = math.log(w / (alpha * beta)) / beta
    f = series_f(exponential(alpha, beta), K=150).eval(x)
    assert f == pytest.approx(-math.log1p(-w) / beta, rel=1e-10, abs=1e-12)


@settings(max_examples=15)
@given(st.floats(0.05, 2.0), st.floats(0.2, 2.0), st.floats(0.05, 0.45))
def test_f_and_F_are_mutually_inverse(alpha, beta, w):
    # the image point has w/(1-w) < 1, inside the radius of the F series
    x = math.log(w / (alpha * beta)) / beta
    g = exponential(alpha, beta)
    y = x + series_f(g, K=150).eval(x)
    assert y + series_F(g, K=150).eval(y) == pytest.approx(x, abs=1e-9)


def test_series_agrees_with_flow_oracle():
    g = exponential(1.0, 0.5)
    x = np.linspace(-5, 0.5, 12)
    assert np.allclose(series_f(g, K=200).eval(x), f_oracle(g, x), atol=1e-10)
    assert np.allclose(series_F(g, K=200).eval(x), F_oracle(g, x), atol=1e-10)


def test_divergence_flagged_beyond_x_star():
    g = exponential(1.0, 0.5)
    xs = 2 * math.log(2)
    x = np.array([xs - 1.0, xs + 0.5])
    ts = TransformSeries(g, K=60)
    assert ts.admissible(x).tolist() == [True, False]
    with pytest.raises(DomainError, match="diverges"):
        ts.f.eval(x)


def test_convergence_index_is_recorded():
    ts = TransformSeries(exponential(1.0, 0.5), K=200)
    k = ts.converged_at("f", np.array([-6.0, 0.0]))
    assert 0 < k[0] < k[1]


# corrected potential ------------------------------------------------------------------


def test_v_tilde_constant_G_leaves_V():
    V = exponential(1.0, -1.0) + 2.0
    x = np.linspace(-1, 1, 5)
    for conv in Convention:
        vt = v_tilde(V, constant(1.3), conv)
        assert np.allclose(vt.eval(x), V.eval(x))
        assert vt.meta["convention"] is conv


def _correction_fd(G, x, slope, h=1e-3):
    # oracle: centred differences of the closed-form G, not the jet machinery
    G2 = lambda z: G(z) ** 2
    d2 = (-G2(x + 2 * h) + 16 * G2(x + h) - 30 * G2(x) + 16 * G2(x - h) - G2(x - 2 * h)) / (12 * h * h)
    d1 = (-G(x + 2 * h) + 8 * G(x + h) - 8 * G(x - h) + G(x - 2 * h)) / (12 * h)
    return d2 / 8 - slope * d1**2


@pytest.mark.parametrize("conv,slope", [(Convention.SLOPE_EIGHTH, 1 / 8), (Convention.SLOPE_HALF, 1 / 2)])
def test_v_tilde_exponential_correction(conv, slope):
    a, b = 0.7, 1.3
    x = np.linspace(-2, 0.5, 9)
    G = lambda z: 1 + a * b * np.exp(b * z)
    vt = v_tilde(constant(0.0), cat.G_closed(a, b), conv).eval(x)
    assert np.allclose(vt, _correction_fd(G, x, slope), rtol=1e-7, atol=1e-9)
    E = a * b * np.exp(b * x)
    closed = b**2 * E / 4 + (3 / 8 * b**2 * E**2 if conv is Convention.SLOPE_EIGHTH else 0.0)
    assert np.allclose(vt, closed, rtol=1e-13)


def test_v_tilde_unit_parameters_at_origin():
    G = series_G(exponential(1.0, 1.0))
    assert v_tilde(constant(0.0), G, Convention.SLOPE_EIGHTH).eval(0.0) == pytest.approx(0.625, abs=1e-14)


def test_transformed_potential_is_morse_only_for_minus_slope_eighth():
    cfg = cat.MORSE_ACCEPTANCE
    g = cat.generator_for_mass(cfg.alpha, cfg.beta)
    morse = cat.morse_potential(cat.morse_from_config(cfg))
    x = np.linspace(-2, cfg.x_star - 0.5, 120)
    err = {}
    for s in (-1, 1):
        for conv in Convention:
            W = transformed_potential(cat.potential_family(cfg.with_sign(s)), g, K=200, convention=conv).W
            err[(s, conv)] = np.max(np.abs(W.eval(x) - morse.eval(x)))
    assert err[(-1, Convention.SLOPE_EIGHTH)] <= 1e-8
    assert min(v for k, v in err.items() if k != (-1, Convention.SLOPE_EIGHTH)) > 0.1


def test_transformed_potential_reports_admissible_interval():
    g = exponential(1.0, 0.5)
    with pytest.raises(DomainError, match="admissible"):
        transformed_potential(constant(0.0), g, K=60, interval=(-2.0, 3.0))
    spec = transformed_potential(constant(0.0), g, interval=(-2.0, 0.5))
    assert spec.convention is Convention.SLOPE_EIGHTH


def test_transformed_potential_for_constant_mass_is_rescaled_V():
    case = cat.ConstantMassCase(2.0)
    x = np.linspace(0.5, 3, 11)
    W = transformed_potential(case.potential, case.mass_generator()).W
    assert np.allclose(W.eval(x), case.squeezed_potential.eval(x), rtol=1e-13)


def test_W_is_v_tilde_at_displaced_point():
    g = exponential(1.0, 0.5)
    spec = transformed_potential(identity(), g, K=200)
    x = np.array([-3.0, -1.0])
    y = x + cat.f_closed(1.0, 0.5).eval(x)
    E = 0.5 * np.exp(0.5 * y)
    assert np.allclose(spec.W.eval(x), y + 0.25 * E / 4 + 3 / 8 * 0.25 * E**2, atol=1e-12)
