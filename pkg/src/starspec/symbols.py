"""Coherent-state symbols of tridiagonal and band sequences.

The symbol of ``H_j`` at ``z = (x, theta)`` is ``<z|H_j|z>`` for the spin
coherent state with binomial amplitudes. For large j it expands as
``h0 + h1/j + O(1/j^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import binomial_weights
from .oracle import coherent_coefficients, eig_tridiagonal
from .sequence import BandProfileSet, ProfileSet, TridiagonalMatrix, evaluate, materialize
from .spectra import _fs

__all__ = [
    "SymbolDomainError",
    "SymbolExpansion",
    "exact_symbol",
    "h0_h1",
    "band_h0_h1",
    "symbol_fluctuation",
    "verify_f_symbol",
]


class SymbolDomainError(ValueError):
    pass


@dataclass(frozen=True)
class SymbolExpansion:
    h0: Callable
    h1: Callable
    kind: str = "tridiagonal"


def _interior(x):
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0) | (x >= 1)):
        raise SymbolDomainError("the symbol expansion holds only for 0 < x < 1")
    return x


def exact_symbol(m: TridiagonalMatrix, x, theta):
    """<z|H_j|z> = <a_n>_x + 2 <b_{n+1} sqrt(P_n P_{n+1})> cos(theta).

    Writing the off-diagonal part with sqrt(P_n P_{n+1}) is the same as
    2 sqrt(x/(1-x)) <sqrt((2j-n)/(n+1)) b_{n+1}>_x but has no 0/0 at x = 1.
    """
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise SymbolDomainError("x must lie in [0, 1]")
    w = binomial_weights(m.two_j, x)
    diag = float(np.dot(w, m.diag))
    off = float(np.dot(np.sqrt(w[:-1] * w[1:]), m.offdiag))
    return diag + 2 * off * np.cos(theta)


def h0_h1(p: ProfileSet) -> SymbolExpansion:
    """h0 = A0 + 2 B0 cos(theta),
    h1 = A1 + 2 B1 cos(theta) + x(1-x) d2h0/dx2 / 4 - B0 cos(theta)/(8x(1-x))."""

    def h0(x, theta):
        x = _interior(x)
        return evaluate(p.A0, x) + 2 * evaluate(p.B0, x) * np.cos(theta)

    def h1(x, theta):
        x = _interior(x)
        c = np.cos(theta)
        q = x * (1 - x)
        d2h0 = p.d2A0_(x) + 2 * p.d2B0_(x) * c
        return (evaluate(p.A1, x) + 2 * evaluate(p.B1, x) * c + q * d2h0 / 4
                - evaluate(p.B0, x) * c / (8 * q))

    return SymbolExpansion(h0, h1, "tridiagonal")


def band_h0_h1(bp: BandProfileSet) -> SymbolExpansion:
    """h0 = Fs0, h1 = Fs1 + d2Fs0/dtheta2 / (16x(1-x)) + x(1-x) d2Fs0/dx2 / 4."""

    def h0(x, theta):
        x = _interior(x)
        c, d = bp.coefficients(x, 0)
        return _fs(c, d, theta)

    def h1(x, theta):
        x = _interior(x)
        q = x * (1 - x)
        c1, d1 = bp.coefficients(x, 1)
        c0, d0 = bp.coefficients(x, 0)
        dc, dd = bp.second_derivatives(x)
        return (_fs(c1, d1, theta) + _fs(c0, d0, theta, 2) / (16 * q)
                + q * _fs(dc, dd, theta) / 4)

    return SymbolExpansion(h0, h1, "band")


def _coherent_vector(two_j, x, theta):
    n = np.arange(two_j + 1)
    return coherent_coefficients(two_j, x) * np.exp(1j * n * theta)


def symbol_fluctuation(m: TridiagonalMatrix, x, theta=np.pi / 2):
    """<z|H^2|z> - <z|H|z>^2, computed from the coherent vector.

    The leading 1/j term is proportional to |d_z H|^2, which for a constant
    profile vanishes at theta = 0; the default theta = pi/2 is where it is
    largest.
    """
    c = _coherent_vector(m.two_j, float(x), theta)
    hc = m.matvec(c)
    mean = np.vdot(c, hc).real
    return float(np.vdot(hc, hc).real - mean**2)


def _fd(f, t, order, h=1e-4):
    if order == 1:
        return (f(t + h) - f(t - h)) / (2 * h)
    return (f(t + h) - 2 * f(t) + f(t - h)) / (h * h)


def verify_f_symbol(p: ProfileSet, f, j, x, theta, df=None, d2f=None):
    """(exact, predicted) symbol of f(H_j) at (x, theta).

    predicted = f(h0) + [f'(h0) h1 + f''(h0) G / 2] / j with
    G = (d_theta h0)^2 / (8x(1-x)) + x(1-x) (d_x h0)^2 / 2.
    """
    x = float(_interior(x))
    m = materialize(p, j)
    e = eig_tridiagonal(m, want_vectors=True)
    z = _coherent_vector(m.two_j, x, theta)
    amp = np.abs(e.eigenvectors.T @ z) ** 2
    exact = float(np.dot(amp, f(e.eigenvalues)))
    s = h0_h1(p)
    h0 = float(s.h0(x, theta))
    h1 = float(s.h1(x, theta))
    xv = np.array([x])
    dth = -2 * float(evaluate(p.B0, x)) * np.sin(theta)
    dx = float(p.dA0_(xv)[0] + 2 * p.dB0_(xv)[0] * np.cos(theta))
    q = x * (1 - x)
    G = dth**2 / (8 * q) + q * dx**2 / 2
    f1 = df(h0) if df else _fd(f, h0, 1)
    f2 = d2f(h0) if d2f else _fd(f, h0, 2)
    jj = m.two_j / 2
    return exact, float(f(h0) + (f1 * h1 + f2 * G / 2) / jj)
