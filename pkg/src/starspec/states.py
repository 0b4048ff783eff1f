"""Asymptotic eigenstate profiles and expectation values.

At energy lam the eigenvector weights c_n^2 of ``H_j`` approach
``psi_lam(x) = Omega(alpha(x), beta(x), lam) / rho0(lam)`` on the support
``{x : alpha(x) < lam < beta(x)}``, and the products c_n c_{n+1} approach
``phi_lam = cos(theta) psi_lam`` with ``cos(theta) = (lam - A0)/(2 B0)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from . import spectra
from .oracle import eig_tridiagonal
from .sequence import ProfileSet, TridiagonalMatrix, evaluate

__all__ = [
    "SupportSet",
    "ObservableProfiles",
    "MultiIntervalWarning",
    "support_set",
    "psi",
    "phi",
    "expectation",
    "branch_of",
    "finite_wavefunctions",
    "gap_check",
]


class MultiIntervalWarning(RuntimeWarning):
    """The support is a union of intervals; the prediction is an average
    over neighbouring eigenstates rather than a limit along one sequence."""


@dataclass(frozen=True)
class SupportSet:
    intervals: Tuple[Tuple[float, float], ...]

    def __len__(self):
        return len(self.intervals)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=bool)
        for lo, hi in self.intervals:
            out |= (x > lo) & (x < hi)
        return out

    @property
    def single(self):
        return len(self.intervals) == 1


@dataclass(frozen=True)
class ObservableProfiles:
    """Leading profiles of an observable sequence Q_j (diagonal A0~ and
    off-diagonal B0~)."""

    A0: Callable
    B0: Callable = lambda x: np.zeros(np.shape(x))  # noqa: E731


def support_set(p: ProfileSet, lam) -> SupportSet:
    lam = float(lam)
    intervals = p.support(lam)
    if not intervals:
        lo, hi = p.range
        raise ValueError(f"lam = {lam} has empty support (spectrum is [{lo}, {hi}])")
    return SupportSet(tuple(intervals))


def _grouped_panels(p, lam):
    """Quadrature panels grouped by the support interval that holds them."""
    panels, _ = spectra._panels(p, lam)
    groups: List[list] = []
    for x1, x2 in panels:
        if groups and groups[-1][-1][1] == x1:
            groups[-1].append((x1, x2))
        else:
            groups.append([(x1, x2)])
    return groups


def _integrals(p, lam, q=None, tol=1e-11):
    """Per support interval: (int Omega, int (A0~ + 2 B0~ cos) Omega)."""
    out = []
    for group in _grouped_panels(p, lam):
        norm = val = 0.0
        for x1, x2 in group:
            pan = spectra._Panel(p, lam, x1, x2)
            norm += pan.integrate(lambda x, jac, pr: spectra._omega_jac(jac, pr), tol)
            if q is not None:
                def g(x, jac, pr):
                    c = spectra._c_robust(pr)
                    return spectra._omega_jac(jac, pr) * (evaluate(q.A0, x) + 2 * evaluate(q.B0, x) * c)
                val += pan.integrate(g, tol)
        out.append((norm, val))
    return out


def _rho0_checked(p, lam):
    lo, hi = p.range
    if not lo < lam < hi:
        raise ValueError(f"lam = {lam} is not inside the spectrum ({lo}, {hi})")
    r = sum(n for n, _ in _integrals(p, lam))
    if not np.isfinite(r) or r <= 0:
        raise ValueError(f"rho0 vanishes or diverges at lam = {lam}")
    return r


def psi(p: ProfileSet, lam, x):
    """Asymptotic eigenvector weight profile psi_lam(x)."""
    lam = float(lam)
    r = _rho0_checked(p, lam)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        prod = (lam - p.alpha(x)) * (p.beta(x) - lam)
        out = np.where(prod > 0, 1.0 / (math.pi * np.sqrt(prod)), 0.0) / r
    return out if out.ndim else float(out)


def phi(p: ProfileSet, lam, x):
    """phi_lam(x) = (lam - A0)/(2 B0) psi_lam(x)."""
    lam = float(lam)
    x = np.asarray(x, dtype=float)
    ps = np.asarray(psi(p, lam, x))
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(ps > 0, (lam - evaluate(p.A0, x)) / (2 * evaluate(p.B0, x)), 0.0)
    out = c * ps
    return out if out.ndim else float(out)


def expectation(p: ProfileSet, q: ObservableProfiles, lam, branch="all"):
    """<Q>(lam) = int A0~ psi + 2 int B0~ phi.

    ``branch`` is "all" or the index of one support interval, in which case
    both integrals, including the normalisation, are restricted to it.
    """
    lam = float(lam)
    _rho0_checked(p, lam)
    parts = _integrals(p, lam, q)
    if branch == "all":
        if len(parts) > 1:
            warnings.warn(f"support at lam = {lam} has {len(parts)} intervals; "
                          "the result averages neighbouring eigenstates",
                          MultiIntervalWarning, stacklevel=2)
        return sum(v for _, v in parts) / sum(n for n, _ in parts)
    if isinstance(branch, bool) or not isinstance(branch, (int, np.integer)):
        raise ValueError(f"branch must be 'all' or an interval index, got {branch!r}")
    if not 0 <= branch < len(parts):
        raise ValueError(f"branch {branch} out of range: support has {len(parts)} interval(s)")
    n, v = parts[branch]
    return v / n


def branch_of(support: SupportSet, weights, x):
    """Index of the support interval holding more than half of ``weights``
    (eigenvector mass at positions ``x``), or None."""
    weights = np.asarray(weights, dtype=float)
    total = weights.sum()
    for k, (lo, hi) in enumerate(support.intervals):
        if weights[(x >= lo) & (x <= hi)].sum() > 0.5 * total:
            return k
    return None


def finite_wavefunctions(m: TridiagonalMatrix, n):
    """((x_psi, c_m^2), (x_phi, c_m c_{m+1})) for the n-th (0-based)
    eigenvector, with x_psi = m/2j and x_phi = (2m+1)/4j."""
    if not 0 <= n < m.dim:
        raise ValueError(f"n must lie in 0..{m.dim - 1}")
    e = eig_tridiagonal(m, want_vectors=True, select=(n, n))
    c = e.eigenvectors[:, 0]
    two_j = m.two_j
    k = np.arange(two_j + 1)
    xs = k / two_j if two_j else np.zeros(1)
    xp = (2 * k[:-1] + 1) / (2 * two_j) if two_j else np.zeros(0)
    return (xs, c**2), (xp, c[:-1] * c[1:])


def gap_check(m: TridiagonalMatrix, p: ProfileSet, n):
    """2j rho0(lam_n) (lam_{n+1} - lam_n) for 0-based interior n; close to 1
    where the eigenvalues are locally evenly spaced."""
    if not 0 <= n < m.dim - 1:
        raise ValueError(f"n must lie in 0..{m.dim - 2}")
    w = eig_tridiagonal(m, select=(n, n + 1)).eigenvalues
    return float(m.two_j * spectra.rho0(p, w[0]) * (w[1] - w[0]))
