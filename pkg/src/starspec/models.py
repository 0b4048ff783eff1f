"""Built-in model catalogue.

Each constructor returns a :class:`ModelDescriptor` holding the profile
functions, the exact finite-j matrix used by the oracle and, where known,
closed-form densities.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import spectra
from .numerics import elliptic_E, elliptic_K, find_root
from .sequence import (
    BandMatrix,
    BandProfileSet,
    ProfileSet,
    TridiagonalMatrix,
    constant,
    materialize,
    materialize_band,
)

__all__ = [
    "ModelDescriptor",
    "BoundaryRootWarning",
    "toeplitz",
    "alternating_states",
    "lipkin",
    "lipkin_moments",
    "lipkin_full_matrix",
    "uniaxial",
    "laguerre",
    "jacobi",
    "collective_spin",
    "spin_matrices",
    "polynomial_roots",
    "REGISTRY",
    "build",
]


class BoundaryRootWarning(RuntimeWarning):
    pass


@dataclass(frozen=True, eq=False)
class ModelDescriptor:
    """A model: profiles, exact matrices and optional closed forms.

    ``exact(j)`` returns the finite matrix whose asymptotics the profiles
    describe (a :class:`TridiagonalMatrix` or :class:`BandMatrix`).
    ``closed_forms`` may hold ``d0``, ``d1``, ``rho0``, ``rho1`` (continuous
    part) callables and an ``atoms`` list.
    """

    name: str
    parameters: dict
    profiles: object
    exact: Callable
    closed_forms: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def is_band(self):
        return isinstance(self.profiles, BandProfileSet)


def _zero(x):
    return np.zeros(np.shape(x))


# --- Toeplitz and the alternating-states example ----------------------------


def toeplitz(a=0.0, b=1.0):
    if b <= 0:
        raise ValueError("toeplitz requires b > 0")
    a, b = float(a), float(b)
    p = ProfileSet(constant(a), _zero, constant(b), _zero, name="toeplitz",
                   dA0=_zero, dB0=_zero, d2A0=_zero, d2B0=_zero, parameters=dict(a=a, b=b))
    return ModelDescriptor("toeplitz", dict(a=a, b=b), p, lambda j: materialize(p, j))


def alternating_states():
    """A0 = -10x^2 + 11x - 5/2, B0 = x(1-x); alpha peaks at 1/32."""
    p = ProfileSet(
        lambda x: -10 * x**2 + 11 * x - 2.5, _zero, lambda x: x * (1 - x), _zero,
        name="alternating",
        dA0=lambda x: -20 * x + 11, dB0=lambda x: 1 - 2 * x,
        d2A0=lambda x: np.full(np.shape(x), -20.0), d2B0=lambda x: np.full(np.shape(x), -2.0),
    )
    return ModelDescriptor("alternating", {}, p, lambda j: materialize(p, j),
                           notes="support splits into two intervals for -3/2 <= lam < 1/32")


# --- collective spin ---------------------------------------------------------


def spin_matrices(s2):
    """Dense S_x, S_y, S_z for spin s = s2/2 in the basis |s, -s+n>."""
    s = s2 / 2
    m = -s + np.arange(s2 + 1)
    up = np.sqrt(s * (s + 1) - m[:-1] * (m[:-1] + 1))  # <m+1|S+|m>
    Sp = np.diag(up, -1).astype(complex)  # row n+1, column n
    Sx = (Sp + Sp.conj().T) / 2
    Sy = (Sp - Sp.conj().T) / 2j
    Sz = np.diag(m).astype(complex)
    return Sx, Sy, Sz


def collective_spin(h=(0.0, 0.0, 1.0), gx=0.0, gy=0.0):
    """H = h.S + (gx Sx^2 + gy Sy^2)/N, divided by j = s, N = 2s."""
    hx, hy, hz = (float(v) for v in h)
    gx, gy = float(gx), float(gy)
    q = lambda x: x * (1 - x)  # noqa: E731
    r = lambda x: np.sqrt(np.maximum(x * (1 - x), 0.0))  # noqa: E731

    def inv_r(x):
        with np.errstate(divide="ignore"):
            return 1.0 / np.sqrt(x * (1 - x))

    C0 = (
        lambda x: (2 * x - 1) * hz + q(x) * (gx + gy),
        lambda x: r(x) * hx,
        lambda x: q(x) * (gx - gy) / 2,
    )
    D0 = (lambda x: -r(x) * hy, lambda x: _zero(x))
    C1 = (
        constant((gx + gy) / 4),
        lambda x: hx * inv_r(x) / 8,
        constant((gx - gy) / 8),
    )
    D1 = (lambda x: -hy * inv_r(x) / 8, lambda x: _zero(x))
    def d2r(x):
        with np.errstate(divide="ignore"):
            return -0.25 / np.sqrt(x * (1 - x)) ** 3

    d2C0 = (
        constant(-2 * (gx + gy)),
        lambda x: hx * d2r(x),
        constant(-(gx - gy)),
    )
    d2D0 = (lambda x: -hy * d2r(x), lambda x: _zero(x))
    params = dict(hx=hx, hy=hy, hz=hz, gx=gx, gy=gy)
    bp = BandProfileSet(2, C0, C1, D0, D1, name="collective", parameters=params,
                        d2C0=d2C0, d2D0=d2D0)

    def exact(j):
        s2 = int(round(2 * j))
        Sx, Sy, Sz = spin_matrices(s2)
        N = s2
        H = hx * Sx + hy * Sy + hz * Sz + (gx * Sx @ Sx + gy * Sy @ Sy) / N
        H = H / (s2 / 2)
        bands = tuple(np.array([H[n, n - m] for n in range(m, s2 + 1)]) for m in range(3))
        return BandMatrix(s2, bands)

    return ModelDescriptor("collective", params, bp, exact,
                           notes="j = s; exact(j) is the spin-s matrix divided by s")


# --- Lipkin ------------------------------------------------------------------


def _lipkin_sector(gamma, s, parity):
    """Tridiagonal block of Sz + gamma/(4s)(S+^2 + S-^2) on the even or odd
    |s, -s+n> states, divided by 2j (j = s/2 or (s-1)/2)."""
    n = np.arange(parity, 2 * s + 1, 2)
    two_j = len(n) - 1
    diag = (-s + n).astype(float)
    nn = n[:-1]
    off = gamma / (4 * s) * np.sqrt((2 * s - nn) * (nn + 1.0) * (2 * s - nn - 1) * (nn + 2.0))
    return TridiagonalMatrix(two_j, diag / two_j, off / two_j)


def lipkin_full_matrix(gamma, s):
    """Dense Sz + gamma/(4s)(S+^2 + S-^2) in the full spin-s sector."""
    Sx, Sy, Sz = spin_matrices(2 * s)
    Sp = Sx + 1j * Sy
    return np.real(Sz + gamma / (4 * s) * (Sp @ Sp + Sp.conj().T @ Sp.conj().T))


def lipkin(gamma=2.5, parity="even"):
    """Lipkin sectors: A0 = 2x - 1, B0 = gamma x(1-x), A1 = 0 and
    B1 = gamma/8 (even) or gamma(3 - 4x + 4x^2)/8 (odd)."""
    gamma = float(gamma)
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if parity == "even":
        B1 = constant(gamma / 8)
    else:
        B1 = lambda x: gamma * (3 - 4 * x + 4 * x**2) / 8  # noqa: E731
    p = ProfileSet(
        lambda x: 2 * x - 1, _zero, lambda x: gamma * x * (1 - x), B1,
        name=f"lipkin-{parity}",
        dA0=lambda x: np.full(np.shape(x), 2.0), dB0=lambda x: gamma * (1 - 2 * x),
        d2A0=_zero, d2B0=lambda x: np.full(np.shape(x), -2 * gamma),
        parameters=dict(gamma=gamma),
    )
    par = 0 if parity == "even" else 1

    def exact(j):
        two_j = int(round(2 * j))
        s = two_j if par == 0 else two_j + 1
        return _lipkin_sector(gamma, s, par)

    return ModelDescriptor(f"lipkin-{parity}", dict(gamma=gamma), p, exact,
                           notes="exact(j): sector of spin s = 2j (even) or 2j + 1 (odd)")


def lipkin_moments(gamma, lam, m, seeds):
    """<Q^m>(lam) for Q = Jz/(2j) + 1/2 from <Q>, <Q^2>.

    The support polynomial (lam - alpha)(beta - lam) = sum_i a_i x^(4-i) has
    a = (4g^2, -8g^2, 4(g^2 - 1), 4(lam + 1), -(lam + 1)^2), and
    integrating d/dx[x^k sqrt(P)] over the support gives the recursion.
    """
    if m < 0 or int(m) != m:
        raise ValueError("m must be a non-negative integer")
    lo, hi = lipkin(gamma).profiles.range
    if not lo <= lam <= hi:
        raise ValueError(f"lam = {lam} outside the spectrum [{lo}, {hi}]")
    g2 = gamma * gamma
    a = (4 * g2, -8 * g2, 4 * (g2 - 1), 4 * (lam + 1), -((lam + 1) ** 2))
    mom = [1.0, float(seeds[0]), float(seeds[1])]
    for k in range(3, int(m) + 1):
        total = 0.0
        for i in range(1, 5):
            coef = a[i] * (2 + i - 2 * k)
            if coef != 0.0:
                total += coef * mom[k - i]
        mom.append(total / (2 * a[0] * (k - 1)))
    return mom[int(m)]


# --- uniaxial ----------------------------------------------------------------


def _dK(m, K, E):
    m = float(m)
    if abs(m) < 1e-4:
        return math.pi / 2 * (1 / 4 + 9 * m / 32 + 75 * m * m / 256)
    return (E - (1 - m) * K) / (2 * m * (1 - m))


def _dE(m, K, E):
    m = float(m)
    if abs(m) < 1e-4:
        return math.pi / 2 * (-1 / 4 - 3 * m / 32 - 15 * m * m / 256)
    return (E - K) / (2 * m)


def _uniaxial_closed(gamma):
    g = gamma

    def branch_upper(lam):
        A = math.sqrt(1 + 8 * g * lam + 16 * g * g)
        B = (A - 1 - 4 * g * lam) / (2 * A)
        K, E = elliptic_K(B), elliptic_E(B)
        rho0 = K / (math.sqrt(A) * math.pi)
        dA = 4 * g / A
        dB = -(4 * g * A - (1 + 4 * g * lam) * dA) / (2 * A * A)
        dK, dE = _dK(B, K, E) * dB, _dE(B, K, E) * dB
        G = (2 * A * E - (1 + A + 8 * lam * g) * K) / (8 * math.pi * g * math.sqrt(A))
        num_d = 2 * dA * E + 2 * A * dE - (dA + 8 * g) * K - (1 + A + 8 * lam * g) * dK
        rho1 = num_d / (8 * math.pi * g * math.sqrt(A)) - G * dA / (2 * A)
        return rho0, rho1

    def branch_lower(lam):
        r = math.sqrt(lam * lam - 1)
        Cp = -1 - 4 * lam * g + 4 * g * r
        Cm = -1 - 4 * lam * g - 4 * g * r
        dCp = -4 * g + 4 * g * lam / r
        dCm = -4 * g - 4 * g * lam / r
        mm = Cm / Cp
        dm = (dCm * Cp - Cm * dCp) / (Cp * Cp)
        K, E = elliptic_K(mm), elliptic_E(mm)
        rho0 = 2 * K / (math.pi * math.sqrt(Cp))
        G = (Cp * E + (Cm + 1) * K) / (4 * math.pi * g * math.sqrt(Cp))
        num_d = dCp * E + Cp * _dE(mm, K, E) * dm + dCm * K + (Cm + 1) * _dK(mm, K, E) * dm
        rho1 = num_d / (4 * math.pi * g * math.sqrt(Cp)) - G * dCp / (2 * Cp)
        return rho0, rho1

    lam_minus = -1.0 if g < 0.25 else -2 * g - 1 / (8 * g)

    def pick(lam):
        lam = float(lam)
        if lam < lam_minus or lam > 1:
            raise ValueError(f"lam = {lam} outside [{lam_minus}, 1]")
        if lam >= -1:
            return branch_upper(lam)
        return branch_lower(lam)

    atoms = [spectra.Atom(1.0, 1 / (4 * math.sqrt(1 + 4 * g)))]
    if g < 0.25:
        atoms.append(spectra.Atom(-1.0, 1 / (4 * math.sqrt(1 - 4 * g))))
    elif g > 0.25:
        atoms.append(spectra.Atom(lam_minus, 2 * g / math.sqrt(16 * g * g - 1)))
    return dict(
        rho0=lambda lam: pick(lam)[0],
        rho1=lambda lam: pick(lam)[1],
        atoms=sorted(atoms, key=lambda a: a.location),
        range=(lam_minus, 1.0),
    )


def uniaxial(gamma=0.5):
    """H = (Sx - 4 gamma Sz^2 / N)/s: A0 = -2 gamma (1-2x)^2,
    B0 = sqrt(x(1-x)), A1 = 0, B1 = 1/(8 sqrt(x(1-x)))."""
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError("uniaxial requires gamma >= 0")

    def B0(x):
        return np.sqrt(np.maximum(x * (1 - x), 0.0))

    def B1(x):
        with np.errstate(divide="ignore"):
            return 1.0 / (8 * np.sqrt(x * (1 - x)))

    def dB0(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return (1 - 2 * x) / (2 * np.sqrt(x * (1 - x)))

    def d2B0(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return -1.0 / (4 * (x * (1 - x)) ** 1.5)

    p = ProfileSet(
        lambda x: -2 * gamma * (1 - 2 * x) ** 2, _zero, B0, B1, name="uniaxial",
        dA0=lambda x: 8 * gamma * (1 - 2 * x), dB0=dB0,
        d2A0=lambda x: np.full(np.shape(x), -16 * gamma), d2B0=d2B0,
        parameters=dict(gamma=gamma),
    )

    def exact(j):
        two_j = int(round(2 * j))
        n = np.arange(two_j + 1)
        diag = -2 * gamma * (2 * n / two_j - 1.0) ** 2
        k = np.arange(1, two_j + 1)
        off = np.sqrt(k * (two_j + 1.0 - k)) / two_j
        return TridiagonalMatrix(two_j, diag, off)

    closed = _uniaxial_closed(gamma) if gamma > 0 else {}
    return ModelDescriptor("uniaxial", dict(gamma=gamma), p, exact, closed)


# --- Laguerre ----------------------------------------------------------------


def _laguerre_closed(a0, a1):
    lo = 4 + a0 - 2 * math.sqrt(4 + 2 * a0)
    hi = 4 + a0 + 2 * math.sqrt(4 + 2 * a0)

    def ABC(lam):
        A = math.sqrt(max(0.0, 8 * lam - (lam - a0) ** 2)) / (4 * math.pi)
        B = math.acos(max(-1.0, min(1.0, (a0 - lam + 4) / (2 * math.sqrt(2 * a0 + 4))))) / math.pi
        if a0 == 0:
            C = math.acos(max(-1.0, min(1.0, math.sqrt(lam) / (2 * math.sqrt(2))))) / (2 * math.pi)
        else:
            C = math.acos(max(-1.0, min(1.0, (a0 + lam) / (2 * math.sqrt((a0 + 2) * lam))))) / (2 * math.pi)
        return A, B, C

    def d0(lam):
        if lam <= lo:
            return 0.0
        if lam >= hi:
            return 1.0
        A, B, C = ABC(lam)
        return A + B - a0 * C

    def d1(lam):
        if lam < lo or lam >= hi:
            return 0.0
        A, B, C = ABC(lam)
        return -A / 2 + B / 4 + (a0 - 2 * a1) * C / 2 - 0.125

    def sq(lam):
        return math.sqrt(max(0.0, (hi - lam) * (lam - lo)))

    def rho0(lam):
        return sq(lam) / (4 * math.pi * lam) if lo < lam < hi else 0.0

    def rho1(lam):
        if not lo < lam < hi:
            return 0.0
        num = (lam - a0) * (lam - a0 + 2 * a1 - 2) - 2 * a0
        return num / (8 * math.pi * lam * sq(lam))

    atoms = [spectra.Atom(lo, -(1 + (2 * a1 if a0 == 0 else 0.0)) / 8), spectra.Atom(hi, -0.125)]
    return dict(d0=d0, d1=d1, rho0=rho0, rho1=rho1, atoms=atoms, range=(lo, hi))


def laguerre(alpha0=1.0, alpha1=5.0):
    """Jacobi matrix of L^(alpha0 j + alpha1) divided by j."""
    a0, a1 = float(alpha0), float(alpha1)
    if a0 < 0:
        raise ValueError("laguerre requires alpha0 >= 0")

    def B0(x):
        return np.sqrt(np.maximum(2 * x * (2 * x + a0), 0.0))

    def B1(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return (4 * x * (a1 + 1) + a0) / (4 * np.sqrt(2 * x * (2 * x + a0)))

    def dB0(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return (4 * x + a0) / np.sqrt(2 * x * (2 * x + a0))

    def d2B0(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            u = 2 * x * (2 * x + a0)
            return (4 * np.sqrt(u) - (4 * x + a0) * (8 * x + 2 * a0) / (2 * np.sqrt(u))) / u

    p = ProfileSet(
        lambda x: 4 * x + a0, constant(1 + a1), B0, B1, name="laguerre",
        dA0=lambda x: np.full(np.shape(x), 4.0), dB0=dB0, d2A0=_zero, d2B0=d2B0,
        parameters=dict(alpha0=a0, alpha1=a1),
    )

    def exact(j):
        two_j = int(round(2 * j))
        jj = two_j / 2
        al = a0 * jj + a1
        if al <= -1:
            raise ValueError("alpha0 j + alpha1 must exceed -1")
        n = np.arange(two_j + 1)
        k = np.arange(1, two_j + 1)
        return TridiagonalMatrix(two_j, (2 * n + al + 1) / jj, np.sqrt(k * (k + al)) / jj)

    return ModelDescriptor("laguerre", dict(alpha0=a0, alpha1=a1), p, exact, _laguerre_closed(a0, a1),
                           notes="eigenvalues are Laguerre zeros divided by j")


# --- Jacobi ------------------------------------------------------------------


def jacobi(alpha0=1.0, alpha1=0.0, beta0=1.0, beta1=0.0):
    """Jacobi matrix of P^(alpha0 j + alpha1, beta0 j + beta1).

    With s = 4x + alpha0 + beta0 and sigma = alpha1 + beta1 the large-j
    expansion of the recurrence coefficients gives
    A0 = (beta0^2 - alpha0^2)/s^2,
    A1 = 2(beta0 beta1 - alpha0 alpha1)/s^2 - (beta0^2 - alpha0^2)(2 sigma + 2)/s^3,
    B0 = 2 sqrt(2x(2x + alpha0)(2x + beta0)(2x + alpha0 + beta0))/s^2 and
    B1 = B0 [1/(4x) + (alpha1 + 1/2)/(2x + alpha0) + (beta1 + 1/2)/(2x + beta0)
             + (sigma + 1/2)/(2x + alpha0 + beta0) - 4(sigma + 1)/s] / 2.
    """
    a0, a1, b0, b1 = (float(v) for v in (alpha0, alpha1, beta0, beta1))
    if a0 < 0 or b0 < 0:
        raise ValueError("jacobi requires alpha0, beta0 >= 0")
    if a0 + b0 == 0:
        raise ValueError("alpha0 + beta0 must be positive")
    sig = a1 + b1
    d2 = b0 * b0 - a0 * a0

    def s_(x):
        return 4 * x + a0 + b0

    def A0(x):
        return d2 / s_(x) ** 2

    def A1(x):
        s = s_(x)
        return 2 * (b0 * b1 - a0 * a1) / s**2 - d2 * (2 * sig + 2) / s**3

    def poly(x):
        return 2 * x * (2 * x + a0) * (2 * x + b0) * (2 * x + a0 + b0)

    def B0(x):
        return 2 * np.sqrt(np.maximum(poly(x), 0.0)) / s_(x) ** 2

    def B1(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            br = (1 / (4 * x) + (a1 + 0.5) / (2 * x + a0) + (b1 + 0.5) / (2 * x + b0)
                  + (sig + 0.5) / (2 * x + a0 + b0) - 4 * (sig + 1) / s_(x))
            return B0(x) * br / 2

    def dA0(x):
        return -8 * d2 / s_(x) ** 3

    def dB0(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            P = poly(x)
            dP = 2 * ((2 * x + a0) * (2 * x + b0) * (2 * x + a0 + b0)
                      + 2 * x * ((2 * x + b0) * (2 * x + a0 + b0)
                                 + (2 * x + a0) * (2 * x + a0 + b0)
                                 + (2 * x + a0) * (2 * x + b0)))
            s = s_(x)
            return dP / (s**2 * np.sqrt(P)) - 16 * np.sqrt(P) / s**3

    p = ProfileSet(A0, A1, B0, B1, name="jacobi", dA0=dA0, dB0=dB0,
                   d2A0=lambda x: 96 * d2 / s_(x) ** 4,
                   parameters=dict(alpha0=a0, alpha1=a1, beta0=b0, beta1=b1))

    def exact(j):
        two_j = int(round(2 * j))
        jj = two_j / 2
        al, be = a0 * jj + a1, b0 * jj + b1
        if al <= -1 or be <= -1:
            raise ValueError("alpha, beta must exceed -1")
        n = np.arange(two_j + 1, dtype=float)
        t = 2 * n + al + be
        diag = (be * be - al * al) / (t * (t + 2))
        k = np.arange(1, two_j + 1, dtype=float)
        t = 2 * k + al + be
        off = 2 * np.sqrt(k * (k + al) * (k + be) * (k + al + be) / ((t - 1) * t * t * (t + 1)))
        return TridiagonalMatrix(two_j, diag, off)

    x1 = np.array([1.0])
    lo = float(p.alpha(x1)[0])
    hi = float(p.beta(x1)[0])
    abar, bbar = a0 - 2 * a1, b0 - 2 * b1
    pref = a0 + b0 + 4

    def sq(lam):
        return math.sqrt(max(0.0, (hi - lam) * (lam - lo)))

    def rho0(lam):
        return pref * sq(lam) / (4 * math.pi * (1 - lam * lam)) if lo < lam < hi else 0.0

    def rho1_printed(lam):
        if not lo < lam < hi:
            return 0.0
        br = a0 * abar / (1 - lam) + b0 * bbar / (1 + lam) - (abar + bbar - 2) / (2 * pref)
        return pref * br / (4 * math.pi * sq(lam))

    def rho1(lam):
        # the endpoint terms carry an extra 1/pref^2 relative to rho1_printed;
        # this version agrees with the generic pipeline and the exact spectra
        if not lo < lam < hi:
            return 0.0
        br = (a0 * abar / (1 - lam) + b0 * bbar / (1 + lam)) / pref - (abar + bbar - 2) / 2
        return br / (4 * math.pi * sq(lam))

    # the alpha parameter governs the x = 0 edge, A0(0) = 1 when alpha0 = 0,
    # so its correction sits at lam_+ (and beta's at lam_-)
    atoms = [
        spectra.Atom(lo, -(1 + (2 * b1 if b0 == 0 else 0.0)) / 8),
        spectra.Atom(hi, -(1 + (2 * a1 if a0 == 0 else 0.0)) / 8),
    ]
    closed = dict(rho0=rho0, rho1=rho1, rho1_printed=rho1_printed, atoms=atoms, range=(lo, hi))
    return ModelDescriptor("jacobi", dict(alpha0=a0, alpha1=a1, beta0=b0, beta1=b1), p, exact, closed,
                           notes="profiles derived from the large-j expansion of the recurrence")


# --- polynomial roots --------------------------------------------------------


def polynomial_roots(model: ModelDescriptor, j, n, order=1):
    """Approximate the n-th (1-based) eigenvalue of ``model.exact(j)`` by
    solving I0(lam) [+ I1(lam)/j] = n/(2j+1).

    Laguerre uses the closed-form D0, D1; other models use the generic
    pipeline. For Laguerre the physical zero is j times the result.
    """
    two_j = int(round(2 * j))
    jj = two_j / 2
    D = two_j + 1
    if not 1 <= n <= D:
        raise ValueError(f"n must lie in 1..{D}")
    cf = model.closed_forms
    p = model.profiles
    f0 = cf.get("d0") or (lambda lam: spectra.d0(p, lam))
    f1 = cf.get("d1") or (lambda lam: spectra.d1(p, lam))
    lo, hi = p.range
    target = n / D

    def g(lam):
        val = f0(lam)
        if order == 1:
            val += (f1(lam) + 0.25) / jj
        return val - target

    eps = 1e-12 * max(1.0, abs(hi - lo))
    a, b = lo + eps, hi - eps
    ga, gb = g(a), g(b)
    if ga > 0 or gb < 0:
        warnings.warn(f"n = {n}: target outside the index range; root clamped to the spectrum edge",
                      BoundaryRootWarning, stacklevel=2)
        return a if ga > 0 else b
    return find_root(g, a, b, tol=1e-14)


# --- registry ----------------------------------------------------------------


REGISTRY = {
    "toeplitz": toeplitz,
    "alternating": alternating_states,
    "lipkin-even": lambda gamma=2.5: lipkin(gamma, "even"),
    "lipkin-odd": lambda gamma=2.5: lipkin(gamma, "odd"),
    "uniaxial": uniaxial,
    "collective": collective_spin,
    "laguerre": laguerre,
    "jacobi": jacobi,
}


def build(name, **params):
    if name not in REGISTRY:
        raise KeyError(f"unknown model {name!r}; choose from {sorted(REGISTRY)} or 'custom'")
    return REGISTRY[name](**params)
