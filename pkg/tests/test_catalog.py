import math

import numpy as np
import pytest

from pdmsqueeze import catalog as cat
from pdmsqueeze.errors import DomainError, GammaUndefined, ParamError
from pdmsqueeze.transform import series_G


def test_mass_at_origin_quarter():
    assert cat.mass_family(1.0, 1.0).eval(0.0) == pytest.approx(0.25, abs=1e-16)


def test_mass_tends_to_one_on_the_left():
    assert cat.mass_family(1.0, 1.0).eval(-40.0) == pytest.approx(1.0, abs=1e-15)


def test_mass_in_unit_interval_and_analytic_derivatives():
    m = cat.mass_family(0.7, 1.3)
    x = np.linspace(-5, 5, 101)
    v = m.eval(x)
    assert np.all((v > 0) & (v < 1))
    w = 0.7 * 1.3 * np.exp(1.3 * x)
    assert np.allclose(m.derivative(1).eval(x), -2 * 1.3 * w / (1 + w) ** 3, rtol=1e-13)


@pytest.mark.parametrize("args", [(0.0, 1.0), (1.0, -1.0)])
def test_mass_parameter_validation(args):
    with pytest.raises(ParamError):
        cat.mass_family(*args)


def test_figure1_curves_decrease_and_order_by_beta():
    d = cat.figure1_data()
    x = d["x"]
    assert x.size == 501 and x[0] == -6 and x[-1] == 4
    for b in cat.FIGURE_BETAS:
        assert np.all(np.diff(d[f"m_beta={b:g}"]) < 0)
    right = x > 0
    assert np.all(d["m_beta=0.5"][right] > d["m_beta=1"][right])
    assert np.all(d["m_beta=1"][right] > d["m_beta=2"][right])


def test_generator_value_and_G_termination():
    g = cat.generator_for_mass(1.0, 1.0)
    assert g.eval(0.0) == 1.0
    x = np.linspace(-3, 1, 9)
    assert np.allclose(series_G(g).eval(x), cat.G_closed(1.0, 1.0).eval(x), rtol=1e-15)


def test_potential_substitution_at_origin():
    cfg = cat.ExampleConfig(1.0, 1.0, 1.0, 1.0, a3_sign=1)
    assert cat.potential_family(cfg).eval(0.0) == pytest.approx(2.125, abs=1e-15)
    assert cfg.a2 == 0.25 and cfg.a3 == 0.25 and cfg.a4 == -0.375


def test_potential_left_asymptotics():
    cfg = cat.ExampleConfig(1.0, 1.0, 1.0, 1.0)
    x = -20.0
    lead = 1 + math.exp(-x) + 0.25 * math.exp(-2 * x)
    assert cat.potential_family(cfg).eval(x) == pytest.approx(lead, rel=1e-15)


def test_figure2_columns():
    d = cat.figure2_data()
    i0 = int(np.argmin(np.abs(d["x"])))
    assert d["x"][i0] == 0.0
    assert d["V_beta=1"][i0] == pytest.approx(2.125, abs=1e-14)


def test_config_validation():
    with pytest.raises(ParamError):
        cat.ExampleConfig(1.0, 1.0, 0.0, 1.0)
    with pytest.raises(ParamError):
        cat.ExampleConfig(1.0, 1.0, 1.0, 1.0, a3_sign=0)
    assert cat.ExampleConfig(1.0, 1.0, 1.0, 1.0).with_sign(1).a3 == 0.25


def test_morse_parameters_beta3():
    mp = cat.morse_from_config(cat.ExampleConfig(1.0, 3.0, 1.0, 1.0))
    assert mp.D_e == pytest.approx(0.25)
    assert mp.gamma == pytest.approx(0.0, abs=1e-15)


def test_morse_parameters_undefined_for_unit_config():
    with pytest.raises(GammaUndefined) as err:
        cat.morse_from_config(cat.ExampleConfig(1.0, 1.0, 1.0, 1.0))
    assert err.value.log_argument == pytest.approx(-1.0)


def test_acceptance_config_morse_parameters():
    cfg = cat.MORSE_ACCEPTANCE
    mp = cat.morse_from_config(cfg)
    assert mp.D_e == pytest.approx(81.0)
    # gamma = (1/beta) ln(a1 / (alpha beta a1 - 2 a0)) = 2 ln(400/18) for beta = 1/2
    assert mp.gamma == pytest.approx(2 * math.log(400 / 18), rel=1e-15)
    assert mp.gamma == pytest.approx(6.2021855784, abs=1e-9)
    assert cfg.x_star == pytest.approx(-2 * math.log(0.05))
    assert cfg.x_star < mp.gamma  # the well minimum lies beyond the admissible edge


def test_morse_potential_values():
    mp = cat.MorseParams(0.25, 3.0, 0.0)
    W = cat.morse_potential(mp)
    assert W.eval(0.0) == 0.0
    assert W.eval(1.0) == pytest.approx(0.25 * (1 - math.exp(-3)) ** 2, rel=1e-15)
    assert W.eval(1.0) == pytest.approx(0.2257262, abs=5e-8)
    assert W.eval(40.0) == pytest.approx(0.25, rel=1e-15)


def test_morse_textbook_levels():
    mp = cat.MorseParams(81.0, 0.5, 0.0)
    lv = mp.levels()
    assert lv.size == 25  # floor(sqrt(2 D_e)/beta - 1/2) + 1
    assert lv[0] == pytest.approx(0.5 * math.sqrt(162) * 0.5 - 0.25 * 0.25 / 2)
    assert np.all(lv < mp.D_e) and np.all(np.diff(lv) > 0)


def test_closed_forms_at_origin():
    assert cat.f_closed(1.0, 0.5).eval(0.0) == pytest.approx(2 * math.log(2), rel=1e-15)
    assert cat.G_closed(1.0, 0.5).eval(0.0) == 1.5
    with pytest.raises(DomainError):
        cat.f_closed(1.0, 0.5).eval(2 * math.log(2))


def test_forward_map_monotone_and_onto():
    cfg = cat.ExampleConfig(1.0, 0.5, 1.0, 1.0)
    u = cfg.x_star - np.logspace(1, -12, 400)
    y = cat.map_forward(cfg, u)
    assert np.all(np.diff(y) > 0)
    assert y[0] < -8.5 and y[-1] > 50
    assert np.allclose(cat.map_backward(cfg, y), u, atol=1e-9)
    with pytest.raises(DomainError):
        cat.map_forward(cfg, [cfg.x_star])


def test_G_closed_squared_times_mass_is_one():
    x = np.linspace(-8, 8, 200)
    for a, b in [(1.0, 0.5), (0.1, 0.5), (2.0, 2.0)]:
        G = cat.G_closed(a, b).eval(x)
        assert np.max(np.abs(G * G * cat.mass_family(a, b).eval(x) - 1)) <= 1e-12


def test_constant_mass_case():
    case = cat.ConstantMassCase(2.0)
    assert np.allclose(case.levels(4), [0.35355339, 1.06066017, 1.76776695, 2.47487373], atol=1e-8)
    assert case.squeezed_potential.eval(2.0) == pytest.approx(1.0)
    with pytest.raises(ParamError):
        cat.ConstantMassCase(-1.0)
