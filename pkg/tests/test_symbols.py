import math

import numpy as np
import pytest

from starspec import models, symbols
from starspec.sequence import BandProfileSet, TridiagonalMatrix, materialize


def test_exact_symbol_toeplitz(toeplitz01):
    m = toeplitz01.exact(60)
    assert symbols.exact_symbol(m, 0.3, math.pi / 2) == pytest.approx(0, abs=1e-14)
    vals = [symbols.exact_symbol(toeplitz01.exact(j), 0.5, 0.0) for j in (15, 60, 240)]
    assert np.all(np.diff(np.abs(np.array(vals) - 2)) < 0)
    # h1 = -cos(theta)/(8x(1-x)) = -1/2 at the centre
    assert 240 * (vals[-1] - 2) == pytest.approx(-0.5, abs=0.01)


def test_exact_symbol_corner(lipkin25):
    m = lipkin25.exact(20)
    assert symbols.exact_symbol(m, 0.0, 0.7) == m.diag[0]
    assert symbols.exact_symbol(m, 1.0, 0.7) == m.diag[-1]
    with pytest.raises(symbols.SymbolDomainError):
        symbols.exact_symbol(m, 1.2, 0.0)


def test_h0_values(lipkin25, toeplitz01, alternating):
    s = symbols.h0_h1(lipkin25.profiles)
    assert s.h0(0.5, 0.0) == pytest.approx(1.25)
    x = np.linspace(0.1, 0.9, 9)
    t = symbols.h0_h1(toeplitz01.profiles)
    for th in (0.0, 1.0, 2.0):
        np.testing.assert_allclose(t.h1(x, th), -np.cos(th) / (8 * x * (1 - x)))
    a = symbols.h0_h1(alternating.profiles)
    np.testing.assert_allclose(a.h1(x, math.pi / 2), x * (1 - x) * (-20) / 4, atol=1e-12)


def test_periodic_in_theta(lipkin25):
    s = symbols.h0_h1(lipkin25.profiles)
    x = np.linspace(0.1, 0.9, 5)
    for th in (0.3, 2.0):
        np.testing.assert_allclose(s.h0(x, th), s.h0(x, th + 2 * math.pi))
        np.testing.assert_allclose(s.h1(x, th), s.h1(x, th + 2 * math.pi))


def test_domain(lipkin25):
    s = symbols.h0_h1(lipkin25.profiles)
    with pytest.raises(symbols.SymbolDomainError):
        s.h1(0.0, 0.0)


@pytest.mark.parametrize("name", ["lipkin-even", "uniaxial", "alternating"])
def test_band_embedding_agrees(name):
    p = models.build(name).profiles
    tri = symbols.h0_h1(p)
    band = symbols.band_h0_h1(BandProfileSet.from_tridiagonal(p))
    x = np.linspace(0.05, 0.95, 13)
    for th in (0.0, 0.9, math.pi / 2, 3.0):
        np.testing.assert_allclose(band.h0(x, th), tri.h0(x, th), atol=1e-12)
        np.testing.assert_allclose(band.h1(x, th), tri.h1(x, th), atol=1e-12)


def test_band_needs_closed_profiles():
    with pytest.raises(ValueError):
        BandProfileSet.from_tridiagonal(models.laguerre(1, 5).profiles)


def test_band_sz_only():
    s = symbols.band_h0_h1(models.collective_spin((0, 0, 0.7)).profiles)
    x = np.linspace(0.1, 0.9, 5)
    np.testing.assert_allclose(s.h0(x, 1.1), (2 * x - 1) * 0.7, atol=1e-14)
    np.testing.assert_allclose(s.h1(x, 1.1), 0.0, atol=1e-14)


def test_band_symbol_exact_for_quadratic_spin():
    # the coherent-state symbol of a quadratic spin Hamiltonian is
    # polynomial in 1/j, so h0 + h1/j is exact here
    md = models.collective_spin((1, 0.2, 0.3), -0.4, -0.1)
    s = symbols.band_h0_h1(md.profiles)
    res = []
    for j in (32, 64, 128):
        H = md.exact(j).dense()
        c = symbols._coherent_vector(2 * j, 0.4, 0.8)
        ex = np.vdot(c, H @ c).real
        res.append(abs(ex - s.h0(0.4, 0.8) - s.h1(0.4, 0.8) / j))
    assert max(res) < 1e-9


def test_fluctuation():
    m = TridiagonalMatrix(40, np.full(41, 3.0), np.zeros(40))
    assert symbols.symbol_fluctuation(m, 0.4) == pytest.approx(0, abs=1e-12)
    p = models.toeplitz(0, 1).profiles
    r = symbols.symbol_fluctuation(materialize(p, 256), 0.5) / symbols.symbol_fluctuation(materialize(p, 512), 0.5)
    assert r == pytest.approx(2, rel=0.05)


def test_fluctuation_edge_anomaly():
    p = models.toeplitz(0, 1).profiles
    f = [symbols.symbol_fluctuation(materialize(p, j), 1 / j) for j in (64, 128, 256)]
    # no 1/j decay at x ~ 1/j
    assert f[2] > 0.8 * f[0]


def test_f_symbol_identity(lipkin25):
    ident = lambda x: x  # noqa: E731
    errs = []
    for j in (64, 128):
        ex, pred = symbols.verify_f_symbol(lipkin25.profiles, ident, j, 0.4, 0.5)
        errs.append(abs(ex - pred))
    assert errs[1] < errs[0] / 3.5


def test_f_symbol_square_lipkin():
    p = models.lipkin(1.0).profiles
    sq = lambda x: x * x  # noqa: E731
    e = [abs(np.subtract(*symbols.verify_f_symbol(p, sq, j, 0.5, 0.0, df=lambda x: 2 * x,
                                                  d2f=lambda x: 2.0 + 0 * x)))
         for j in (128, 256)]
    assert e[0] / e[1] >= 3.5


def test_f_symbol_quartic_toeplitz(toeplitz01):
    f = lambda x: x**4  # noqa: E731
    e = [abs(np.subtract(*symbols.verify_f_symbol(toeplitz01.profiles, f, j, 0.5, 0.3)))
         for j in (128, 256)]
    assert e[0] / e[1] >= 3.5
