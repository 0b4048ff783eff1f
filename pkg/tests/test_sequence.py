import math

import numpy as np
import pytest

from starspec import models, sequence as sq
from starspec.sequence import ProfileSet, constant


def test_toeplitz_materialize():
    m = sq.materialize(models.toeplitz(0, 1).profiles, 1)
    np.testing.assert_array_equal(m.diag, [0, 0, 0])
    np.testing.assert_array_equal(m.offdiag, [1, 1])
    assert m.dim == 3 and m.j == 1


def test_materialize_first_order_term():
    p = ProfileSet(constant(0), constant(1), constant(1), constant(0))
    m = sq.materialize(p, 10)
    np.testing.assert_allclose(m.diag, 0.1)
    assert m.dim == 21


def test_half_integer_j(lipkin25):
    m = sq.materialize(lipkin25.profiles, 2.5)
    assert m.dim == 6 and m.two_j == 5
    with pytest.raises(ValueError):
        sq.materialize(lipkin25.profiles, 0.3)


def test_lipkin_element(lipkin25):
    m = sq.materialize(lipkin25.profiles, 1)
    assert m.diag[1] == pytest.approx(0.0, abs=1e-15)


def test_closure(lipkin25):
    assert sq.is_closed(lipkin25.profiles)
    assert not sq.is_closed(models.toeplitz(0, 1).profiles)
    lag = models.laguerre(1, 5).profiles
    assert not sq.is_closed(lag)
    assert sq.evaluate(lag.B0, 1.0) == pytest.approx(math.sqrt(6), abs=1e-14)


def test_alpha_beta(lipkin25, alternating):
    a, b = sq.alpha_beta(models.toeplitz(0, 1).profiles)
    x = np.linspace(0, 1, 7)
    np.testing.assert_allclose(a(x), -2)
    np.testing.assert_allclose(b(x), 2)
    p = lipkin25.profiles
    assert p.alpha(0.5) == pytest.approx(-1.25)
    assert p.beta(0.5) == pytest.approx(1.25)
    q = alternating.profiles
    assert q.alpha(0.0) == pytest.approx(-2.5) and q.beta(0.0) == pytest.approx(-2.5)


def test_spectral_range():
    assert sq.spectral_range(models.toeplitz(0, 1).profiles) == pytest.approx((-2, 2))
    lo, hi = sq.spectral_range(models.laguerre(1, 5).profiles)
    assert lo == pytest.approx(5 - 2 * math.sqrt(6), abs=1e-12)
    assert hi == pytest.approx(5 + 2 * math.sqrt(6), abs=1e-12)
    assert models.uniaxial(0.5).profiles.range[0] == pytest.approx(-1.25, abs=1e-12)


def test_rejects_bad_profiles():
    with pytest.raises(ValueError):
        ProfileSet(constant(0), constant(0), lambda x: x - 0.5, constant(0))
    with pytest.raises(ValueError):
        ProfileSet(lambda x: np.where(x > 0.5, np.inf, 0.0), constant(0), constant(1), constant(0))


def test_expression_profiles(tmp_path):
    p = sq.profiles_from_expressions("2*x-1", B0="0.5")
    m = sq.materialize(p, 2)
    np.testing.assert_allclose(m.diag, 2 * np.arange(5) / 4 - 1)
    np.testing.assert_allclose(m.offdiag, 0.5)
    f = tmp_path / "model.json"
    f.write_text('{"A0": "x", "B0": "x*(1-x)", "name": "demo"}')
    q = sq.load_profile_json(f)
    assert q.name == "demo" and sq.is_closed(q)
    f.write_text('{"A0": "x"}')
    with pytest.raises(ValueError):
        sq.load_profile_json(f)


def test_band_embedding_matches_tridiagonal(lipkin25):
    p = lipkin25.profiles
    bp = sq.BandProfileSet.from_tridiagonal(p)
    bm = sq.materialize_band(bp, 7)
    tm = sq.materialize(p, 7)
    np.testing.assert_allclose(bm.dense().real, tm.dense(), atol=1e-15)
    assert bm.M == 1


def test_band_requires_closure():
    with pytest.raises(ValueError):
        sq.BandProfileSet(1, (constant(0), constant(1)), (constant(0), constant(0)),
                          (constant(0),), (constant(0),))


def test_band_hermitian():
    md = models.collective_spin((1, 0.2, 0.3), -0.4, -0.1)
    H = md.exact(10).dense()
    np.testing.assert_allclose(H, H.conj().T)
    assert H.shape == (21, 21)


def test_derivative_fallback():
    x = np.linspace(0.1, 0.9, 5)
    np.testing.assert_allclose(sq.derivative(np.sin, x), np.cos(x), atol=1e-9)
    np.testing.assert_allclose(sq.derivative(np.sin, x, 2), -np.sin(x), atol=1e-7)
