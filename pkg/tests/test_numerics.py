import math

import numpy as np
import pytest
from scipy import special

from starspec import numerics as nu


def test_gauss_kronrod_basics():
    r = nu.integrate(np.cos, 0, 2 * math.pi, 1e-12)
    assert abs(r.value) < 1e-12
    assert r.error_estimate <= 1e-12
    assert r.evaluations > 0
    assert nu.integrate(lambda x: x * (1 - x), 0, 1, 1e-12).value == pytest.approx(1 / 6, abs=1e-12)
    assert nu.integrate(lambda x: np.ones_like(x), 0, 1).value == pytest.approx(1.0, abs=1e-14)


def test_gauss_kronrod_gives_up():
    with pytest.raises(nu.QuadratureError) as info:
        nu.integrate(lambda x: np.sin(1 / np.maximum(x, 1e-300)), 0, 1, 1e-14, max_intervals=20)
    assert info.value.result is not None


def test_tanh_sinh_endpoint_singularities():
    r = nu.integrate_singular(lambda x: x**-0.5, 0, 1, 1e-10)
    assert r.value == pytest.approx(2.0, abs=1e-10)
    assert nu.integrate_singular(lambda x: x * x, 0, 1).value == pytest.approx(1 / 3, abs=1e-12)


def test_arcsine_complement_form():
    # exact endpoint distances avoid the rounding that limits the plain form
    r = nu.integrate_singular(lambda x, dl, dr: 1 / np.sqrt(dl * dr), -1, 1, 1e-10, complement=True)
    assert r.value == pytest.approx(math.pi, abs=1e-10)


def test_arcsine_plain_form_limit():
    r = nu.integrate_singular(lambda x: 1 / np.sqrt(1 - x * x), -1, 1, 1e-7)
    assert r.value == pytest.approx(math.pi, abs=1e-7)


def test_find_root():
    assert nu.find_root(lambda x: x * x - 2, 1, 2) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert nu.find_root(lambda x: x, -1, 1) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(nu.BracketError):
        nu.find_root(lambda x: 1.0, 0, 1)


def test_golden_section():
    x, f = nu.golden_section(lambda t: (t - 0.3) ** 2, 0, 1)
    assert x == pytest.approx(0.3, abs=1e-8)
    x, f = nu.golden_section(lambda t: -10 * t**2 + 11 * t, 0, 1, maximize=True)
    assert x == pytest.approx(0.55, abs=1e-8)


def test_elliptic():
    assert nu.elliptic_K(0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert nu.elliptic_E(1) == 1.0
    assert nu.elliptic_E(0) == pytest.approx(math.pi / 2, abs=1e-15)
    direct = nu.integrate_singular(lambda t: 1 / np.sqrt(1 - 0.5 * np.sin(t) ** 2), 0, math.pi / 2, 1e-14)
    assert nu.elliptic_K(0.5) == pytest.approx(direct.value, abs=1e-12)
    m = np.linspace(-3, 0.999, 50)
    np.testing.assert_allclose(nu.elliptic_K(m), special.ellipk(m), rtol=1e-13)
    np.testing.assert_allclose(nu.elliptic_E(m), special.ellipe(m), rtol=1e-13)
    with pytest.raises(ValueError):
        nu.elliptic_K(1.0)


def test_binomial_expectations():
    assert nu.binomial_expect(lambda n: n, 100, 0.3) == pytest.approx(30, abs=1e-10)
    assert nu.binomial_expect(lambda n: np.ones_like(n), 100, 0.3) == pytest.approx(1, abs=1e-12)
    assert nu.binomial_expect(lambda n: n**2, 100, 0.3) == pytest.approx(921, abs=1e-9)
    w = nu.binomial_weights(10, 0.0)
    assert w[0] == 1.0 and w[1:].sum() == 0.0
    w = nu.binomial_weights(3000, 0.4)
    assert w.sum() == pytest.approx(1.0, abs=1e-12)
