import math

import numpy as np
import pytest
from scipy import integrate, optimize
from scipy.special import erf

from uncertainty_limits import gaussian as G
from uncertainty_limits.concentration import sample_function, transform, variance_stats, heisenberg_product
from uncertainty_limits.errors import InvalidParameterError

A_VALUES = (0.01, 0.25, 1.0, 25.0, 400.0)


def erf_level(level):
    # independent of scipy's erfinv: bracket the root of erf
    return optimize.brentq(lambda x: erf(x) - level, 0, 10, xtol=1e-15)


def test_design_validation():
    for a in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(InvalidParameterError):
            G.GaussianDesign(a)


def test_impulse_values_and_normalization():
    d = G.GaussianDesign(1.0)
    assert G.impulse(d, 0.0) == pytest.approx(2 / math.sqrt(math.pi))
    assert G.impulse(d, 50.0) == 0.0
    for a in A_VALUES:
        val, _ = integrate.quad(lambda t: G.impulse(G.GaussianDesign(a), t), 0, np.inf, epsabs=1e-13)
        assert val == pytest.approx(1.0, abs=1e-8)


def test_step_properties():
    d = G.GaussianDesign(1.0)
    assert G.step(d, 0.0) == 0.0
    t = optimize.brentq(lambda t: G.step(d, t) - 0.9, 0, 5)
    assert t == pytest.approx(1.1631, abs=1e-4)
    for a in A_VALUES:
        u = G.step(G.GaussianDesign(a), np.linspace(0, 100, 20001))
        assert np.all(np.diff(u) >= 0)
        assert u[-1] == pytest.approx(1.0, abs=1e-12)


def test_step_is_integral_of_impulse():
    d = G.GaussianDesign(2.0)
    val, _ = integrate.quad(lambda t: G.impulse(d, t), 0, 0.7)
    assert G.step(d, 0.7) == pytest.approx(val, abs=1e-13)


def test_rise_and_settling_constants():
    assert G.RISE_CONSTANT == pytest.approx(erf_level(0.9) - erf_level(0.1), abs=1e-12)
    assert G.SETTLING_CONSTANT == pytest.approx(erf_level(0.97), abs=1e-12)
    d = G.GaussianDesign(1.0)
    assert G.rise_time(d) == pytest.approx(1.074, abs=1e-3)
    assert G.settling_time(d) == pytest.approx(1.534, abs=1e-3)
    # two-decimal values quoted for the constants
    assert round(G.RISE_CONSTANT, 2) == 1.07
    assert round(G.SETTLING_CONSTANT, 2) == 1.53
    assert G.rise_time(G.GaussianDesign(100.0)) == pytest.approx(0.10742, abs=1e-5)


def test_settling_time_is_band_entry():
    d = G.GaussianDesign(3.0)
    ts = G.settling_time(d)
    assert G.step(d, ts) == pytest.approx(0.97, abs=1e-12)


def test_products_are_constant():
    pr, ps = G.products(G.GaussianDesign(1.0))
    assert pr == pytest.approx(1.519, abs=0.01)
    assert ps == pytest.approx(2.169, abs=0.01)
    assert round(pr, 2) == 1.52 and round(ps, 2) == 2.17
    a, b = G.products(G.GaussianDesign(0.25)), G.products(G.GaussianDesign(25.0))
    assert a[0] == pytest.approx(b[0], abs=1e-10)
    assert a[1] == pytest.approx(b[1], abs=1e-10)


def test_freq_std():
    assert G.freq_std(G.GaussianDesign(1.0)) == pytest.approx(math.sqrt(2))


@pytest.mark.parametrize("a", A_VALUES)
def test_design_roundtrip(a):
    d = G.GaussianDesign(a)
    assert G.design_from(rise_time=G.rise_time(d)).a == pytest.approx(a, rel=1e-10)
    assert G.design_from(settling_time=G.settling_time(d)).a == pytest.approx(a, rel=1e-10)
    assert G.design_from(freq_std=G.freq_std(d)).a == pytest.approx(a, rel=1e-10)


def test_design_examples():
    # the quoted constant 1.074 is rounded, so a lands near 1 rather than on it
    assert G.design_from(rise_time=1.074).a == pytest.approx(1.0, abs=1e-3)
    assert G.design_from(freq_std=math.sqrt(2)).a == pytest.approx(1.0, rel=1e-12)
    assert G.design_from(settling_time=0.1534).a == pytest.approx(100.0, rel=1e-3)


def test_design_from_errors():
    with pytest.raises(InvalidParameterError):
        G.design_from(rise_time=-1.0)
    with pytest.raises(InvalidParameterError):
        G.design_from()
    with pytest.raises(InvalidParameterError):
        G.design_from(rise_time=1.0, freq_std=1.0)


def _sampled(a):
    s = 1 / math.sqrt(a)
    return sample_function(lambda t: G.impulse(G.GaussianDesign(a), t), -12 * s, 12 * s, s / 50)


@pytest.mark.parametrize("a", A_VALUES)
def test_heisenberg_equality(a):
    assert heisenberg_product(variance_stats(_sampled(a))) == pytest.approx(0.25, abs=1e-3)


@pytest.mark.parametrize("a", [0.25, 1.0, 25.0])
def test_transform_matches_closed_form(a):
    d = G.GaussianDesign(a)
    s = transform(_sampled(a), omega_max=10 * math.sqrt(a), n_freq=401)
    np.testing.assert_allclose(s.values, G.spectrum(d, s.omegas), atol=1e-6)
