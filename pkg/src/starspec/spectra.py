"""Asymptotic eigenvalue distributions D0, D1, densities, index functions and
trace expansions for smooth tridiagonal and band matrix sequences.

For a profile set with ``alpha = A0 - 2 B0`` and ``beta = A0 + 2 B0`` the
eigenvalue counting function of ``H_j`` behaves as ``D0 + D1/j``.
Support panels are integrated after the substitution
``x = m - h cos(phi)``, which turns the inverse square-root endpoint
behaviour of Omega into a smooth integrand in ``phi``.
"""
from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .numerics import DEFAULT_TOL, QuadratureError, integrate, integrate_singular
from .sequence import BandProfileSet, ProfileSet, evaluate

__all__ = [
    "Atom",
    "DistributionPair",
    "SpectralMeasure",
    "NearSingularWarning",
    "omega",
    "Omega",
    "d0",
    "d1",
    "d1_parts",
    "rho0",
    "rho1",
    "rho",
    "atoms",
    "distribution",
    "index",
    "trace_T0",
    "trace_T1",
    "trace_edge",
    "band_d0_d1",
    "critical_values",
    "write_distribution_csv",
    "write_atoms_json",
]

ATOM_OFFSETS = 1e-6 * np.array([1.0, 2.0, 4.0, 8.0, 16.0])
ATOM_MIN_WEIGHT = 1e-5


class NearSingularWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class Atom:
    """A delta-mass ``weight * delta(lambda - location)``."""

    location: float
    weight: float = 1.0


@dataclass(frozen=True)
class DistributionPair:
    d0: Callable
    d1: Callable
    support: Tuple[float, float]
    d1_discontinuities: Tuple[float, ...] = ()


@dataclass(frozen=True)
class SpectralMeasure:
    density: Callable
    atoms: List[Atom] = field(default_factory=list)
    support: Tuple[float, float] = (0.0, 0.0)

    def atom_mass(self):
        return float(sum(a.weight for a in self.atoms))


# --- elementary kernels ------------------------------------------------------


def omega(alpha, beta, lam):
    """Fraction of theta in [0, 2pi) with (alpha+beta)/2 + (beta-alpha)/2 cos(theta) < lam."""
    a, b, lam = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (alpha, beta, lam)))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.clip((a + b - 2 * lam) / (a - b), -1.0, 1.0)
        out = 0.5 + np.arcsin(r) / math.pi
    out = np.where(lam < a, 0.0, np.where(lam > b, 1.0, out))
    out = np.where(a == b, (lam >= a).astype(float), out)
    return out if out.ndim else float(out)


def Omega(alpha, beta, lam):
    """Arcsine density of ``omega`` in lam; an :class:`Atom` when alpha == beta."""
    alpha, beta, lam = float(alpha), float(beta), float(lam)
    if alpha > beta:
        raise ValueError("Omega requires alpha <= beta")
    if alpha == beta:
        return Atom(alpha, 1.0)
    if not alpha < lam < beta:
        return 0.0
    return 1.0 / (math.pi * math.sqrt((lam - alpha) * (beta - lam)))


# --- panel integration -------------------------------------------------------


def _panels(p: ProfileSet, lam):
    """Support panels [x1, x2] with alpha < lam < beta inside, and the total
    length of the region where lam > beta."""
    pts = np.unique(np.concatenate([[0.0, 1.0], p.level_crossings(lam)]))
    mids = 0.5 * (pts[:-1] + pts[1:])
    al = p.alpha(mids)
    be = p.beta(mids)
    inside = (al < lam) & (be > lam)
    above = be <= lam
    panels = [(float(pts[k]), float(pts[k + 1])) for k in np.nonzero(inside)[0]]
    length = float(np.sum((pts[1:] - pts[:-1])[above]))
    return panels, length


_TAYLOR_MAX = 1e-4


class _Panel:
    """A support interval [x1, x2] at fixed lam.

    ``prod(x, dl, dr)`` returns (lam - alpha)(beta - lam). Close to an
    endpoint that is a level crossing the vanishing factor is a cancelling
    difference; where its relative rounding error would exceed ~1e-8 it is
    replaced by a second-order Taylor expansion in the exact distance to
    that endpoint.
    """

    def __init__(self, p, lam, x1, x2):
        self.p, self.lam, self.x1, self.x2 = p, lam, x1, x2
        self.m = 0.5 * (x1 + x2)
        self.h = 0.5 * (x2 - x1)
        self.ends = []
        scale = 1e-9 * max(1.0, abs(lam))
        for xe, sgn in ((x1, 1.0), (x2, -1.0)):
            ra = lam - float(p.alpha(xe))
            rb = float(p.beta(xe)) - lam
            if abs(ra) < scale or abs(rb) < scale:
                kind = "alpha" if abs(ra) <= abs(rb) else "beta"
                xv = np.array([xe])
                dA, dB = p.dA0_(xv)[0], p.dB0_(xv)[0]
                d2A, d2B = p.d2A0_(xv)[0], p.d2B0_(xv)[0]
                if kind == "alpha":
                    r0, d1_, d2_ = ra, -(dA - 2 * dB), -(d2A - 2 * d2B)
                else:
                    r0, d1_, d2_ = rb, dA + 2 * dB, d2A + 2 * d2B
                if not (np.isfinite(d1_) and np.isfinite(d2_)):
                    # square-root profiles at x = 0, 1 have no Taylor expansion
                    continue
                if 0.0 < xe < 1.0:
                    # an interior endpoint is a computed root; its residual is rounding
                    r0 = 0.0
                size = abs(lam) + abs(float(evaluate(p.A0, xe))) + 2 * abs(float(evaluate(p.B0, xe)))
                # rounding in both the function values and x itself
                radius = 1e8 * np.finfo(float).eps * (size / max(abs(d1_), 1e-300) + abs(xe))
                radius = min(_TAYLOR_MAX, radius)
                self.ends.append((sgn, kind, r0, d1_, d2_, radius))

    def prod(self, x, dl, dr):
        p, lam = self.p, self.lam
        A0 = evaluate(p.A0, x)
        B0 = evaluate(p.B0, x)
        fa = lam - A0 + 2 * B0
        fb = A0 + 2 * B0 - lam
        for sgn, kind, r0, d1_, d2_, radius in self.ends:
            u = dl if sgn > 0 else dr
            near = u < radius
            if not np.any(near):
                continue
            su = sgn * u
            approx = r0 + d1_ * su + 0.5 * d2_ * su * su
            if kind == "alpha":
                fa = np.where(near, approx, fa)
            else:
                fb = np.where(near, approx, fb)
        return np.maximum(fa * fb, 0.0), fa, fb, B0

    def integrate(self, g, tol):
        """int_{x1}^{x2} g(x, jac, prod-tuple) dx with x = m - h cos(phi)."""
        m, h = self.m, self.h

        def integrand(phi):
            dl = 2 * h * np.sin(0.5 * phi) ** 2
            dr = 2 * h * np.cos(0.5 * phi) ** 2
            # anchor x at the nearer end so that x - x1 keeps its precision
            x = np.where(phi < 0.5 * math.pi, self.x1 + dl, self.x2 - dr)
            return g(x, h * np.sin(phi), self.prod(x, dl, dr))

        try:
            return integrate(integrand, 0.0, math.pi, tol, initial=4).value
        except QuadratureError as exc:
            # near a degenerate edge the last digits are out of reach; accept a
            # modest miss with a warning rather than failing the whole sweep
            if exc.result.error_estimate > 1e3 * tol:
                raise
            warnings.warn(f"panel quadrature at lam = {self.lam}: {exc}", NearSingularWarning, stacklevel=3)
            return exc.result.value


def _omega_value(pr):
    """omega on the support from the robust product: asin(sqrt(prod)/2B0)/pi
    measured from whichever of alpha, beta is nearer."""
    prod, fa, fb, B0 = pr
    s = np.clip(np.sqrt(prod) / (2 * B0), 0.0, 1.0)
    w = np.arcsin(s) / math.pi
    return np.where(fa <= fb, w, 1.0 - w)


def _omega_jac(jac, pr):
    """Omega(x) * jac; both factors vanish together at a crossing."""
    prod = pr[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        out = jac / (math.pi * np.sqrt(prod))
    return np.where((jac > 0) & (prod > 0), out, 0.0)


def _c_of(p, x, lam):
    return (lam - evaluate(p.A0, x)) / (2 * evaluate(p.B0, x))


def _c_robust(pr):
    """cos(theta) at the level set, (fa - fb) / (fa + fb)."""
    _, fa, fb, _ = pr
    return np.clip((fa - fb) / (fa + fb), -1.0, 1.0)


def d0(p: ProfileSet, lam, tol=DEFAULT_TOL):
    """D0(lam) = int_0^1 omega(alpha(x), beta(x), lam) dx."""
    lam = float(lam)
    lo, hi = p.range
    if lam <= lo:
        return 0.0
    if lam >= hi:
        return 1.0
    panels, total = _panels(p, lam)
    for x1, x2 in panels:
        pan = _Panel(p, lam, x1, x2)
        total += pan.integrate(lambda x, jac, pr: _omega_value(pr) * jac, tol / max(1, len(panels)))
    return float(min(max(total, 0.0), 1.0))


def rho0(p: ProfileSet, lam, tol=DEFAULT_TOL):
    """rho0(lam) = int_0^1 Omega(alpha(x), beta(x), lam) dx."""
    lam = float(lam)
    total = 0.0
    panels, _ = _panels(p, lam)
    for x1, x2 in panels:
        pan = _Panel(p, lam, x1, x2)
        total += pan.integrate(lambda x, jac, pr: _omega_jac(jac, pr), tol)
    return total


def F_interior(p: ProfileSet, x, c):
    """F(x, c) = (2x-1) dH0/dx / 4 + A1 + 2 B1 c at cos(theta) = c."""
    dH0 = p.dA0_(x) + 2 * p.dB0_(x) * c
    return (2 * x - 1) * dH0 / 4 + evaluate(p.A1, x) + 2 * evaluate(p.B1, x) * c


def _edge_d1(p, e, lam):
    A0 = float(evaluate(p.A0, e))
    B0 = float(evaluate(p.B0, e))
    if abs(B0) < 1e-12:
        return 0.0
    a, b = A0 - 2 * B0, A0 + 2 * B0
    if not a <= lam < b:
        return 0.0
    return math.asin(max(-1.0, min(1.0, (lam - A0) / (2 * B0)))) / (4 * math.pi)


def d1_parts(p: ProfileSet, lam, tol=DEFAULT_TOL):
    """(interior, left edge, right edge) contributions to D1(lam)."""
    lam = float(lam)
    lo, hi = p.range
    interior = 0.0
    if lo < lam < hi:
        panels, _ = _panels(p, lam)

        def g(x, jac, pr):
            return _omega_jac(jac, pr) * F_interior(p, x, _c_robust(pr))

        for x1, x2 in panels:
            pan = _Panel(p, lam, x1, x2)
            interior -= pan.integrate(g, tol / max(1, len(panels)))
    return interior, _edge_d1(p, 0.0, lam), _edge_d1(p, 1.0, lam)


def d1(p: ProfileSet, lam, tol=DEFAULT_TOL):
    """D1(lam) = D1_I + D1_L + D1_R. Right-continuous at its jumps."""
    return float(sum(d1_parts(p, lam, tol)))


def critical_values(p: ProfileSet):
    """Sorted lam where D0 or D1 is not smooth: extremal values of alpha and
    beta (including the endpoint values)."""
    vals = np.concatenate([p.alpha(p.alpha_breaks), p.beta(p.beta_breaks)])
    lo, hi = p.range
    vals = vals[(vals >= lo - 1e-14) & (vals <= hi + 1e-14)]
    return np.unique(np.round(vals, 14))


def jump_candidates(p: ProfileSet):
    lo, hi = p.range
    ends = np.array([0.0, 1.0])
    cands = np.concatenate([[lo, hi], p.alpha(ends), p.beta(ends)])
    out = []
    for c in np.sort(cands):
        if not out or abs(c - out[-1]) > 1e-12:
            out.append(float(c))
    return out


def _one_sided(f, c, side):
    """Limit of f at c from one side: least-squares fit of samples at small
    offsets to a polynomial in sqrt(offset)."""
    d = ATOM_OFFSETS
    v = np.array([f(c + side * dd) for dd in d])
    s = np.sqrt(d / d[-1])
    X = np.column_stack([np.ones_like(s), s, s**2, s**3])
    return float(np.linalg.lstsq(X, v, rcond=None)[0][0])


def atoms(p: ProfileSet, tol=1e-11):
    """Delta-masses of rho1: the jumps of D1 at the six candidate points."""
    out = []
    for c in jump_candidates(p):
        right = _one_sided(lambda t: d1(p, t, tol), c, +1)
        left = _one_sided(lambda t: d1(p, t, tol), c, -1)
        w = right - left
        if abs(w) > ATOM_MIN_WEIGHT:
            out.append(Atom(c, w))
    return out


def _fd_step(lam, breaks, hmax=2.5e-4):
    dist = np.min(np.abs(np.asarray(breaks) - lam)) if len(breaks) else np.inf
    return min(hmax, dist / 8)


def rho1(p: ProfileSet, lam, tol=1e-12):
    """Continuous part of rho1: five-point derivative of D1, with the step
    kept inside the smooth piece containing ``lam``."""
    lam = float(lam)
    lo, hi = p.range
    if not lo < lam < hi:
        return 0.0
    breaks = np.concatenate([critical_values(p), jump_candidates(p)])
    h = _fd_step(lam, breaks)
    if h > 0:
        f = [d1(p, lam + k * h, tol) for k in (-2, -1, 1, 2)]
        return (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
    # lam sits on a break: right derivative, matching right-continuity of D1
    above = np.asarray(breaks)[np.asarray(breaks) > lam]
    h = min(1e-3, (float(above.min()) - lam) / 8) if above.size else 1e-3
    f = [d1(p, lam + k * h, tol) for k in (1, 2, 3, 4)]
    # third-order one-sided stencil through lam + h .. lam + 4h, evaluated at lam
    return (-26 * f[0] + 57 * f[1] - 42 * f[2] + 11 * f[3]) / (6 * h)


def distribution(p: ProfileSet, tol=DEFAULT_TOL) -> DistributionPair:
    return DistributionPair(
        d0=lambda lam: d0(p, lam, tol),
        d1=lambda lam: d1(p, lam, tol),
        support=p.range,
        d1_discontinuities=tuple(a.location for a in atoms(p)),
    )


def rho(p: ProfileSet, order=0, tol=DEFAULT_TOL) -> SpectralMeasure:
    if order == 0:
        return SpectralMeasure(lambda lam: rho0(p, lam, tol), [], p.range)
    if order == 1:
        return SpectralMeasure(lambda lam: rho1(p, lam), atoms(p), p.range)
    raise ValueError("order must be 0 or 1")


def index(p: ProfileSet, lam, order=0, tol=DEFAULT_TOL):
    """I0 = D0; I1 = D1 + 1/4."""
    if order == 0:
        return d0(p, lam, tol)
    if order == 1:
        return d1(p, lam, tol) + 0.25
    raise ValueError("order must be 0 or 1")


# --- traces ------------------------------------------------------------------

_THETA_N = 256
_THETA = (np.arange(_THETA_N) + 0.5) * (2 * math.pi / _THETA_N)


def _fprime(f, df):
    if df is not None:
        return df

    def fd(t):
        h = 1e-3 * np.maximum(1.0, np.abs(t))
        return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h)

    return fd


def _theta_mean(values):
    return values.mean(axis=-1)


def trace_T0(p: ProfileSet, f, tol=DEFAULT_TOL):
    """int dx dtheta/2pi f(A0 + 2 B0 cos theta)."""
    cos = np.cos(_THETA)

    def g(x):
        h0 = evaluate(p.A0, x)[:, None] + 2 * evaluate(p.B0, x)[:, None] * cos
        return _theta_mean(np.asarray(f(h0), dtype=float))

    return integrate(g, 0.0, 1.0, tol, initial=8).value


def trace_edge(p: ProfileSet, f, e):
    """Edge contribution to T1 at x = e (zero for a closed edge)."""
    A0 = float(evaluate(p.A0, e))
    B0 = float(evaluate(p.B0, e))
    arc = float(np.mean(f(A0 + 2 * B0 * np.cos(_THETA))))
    return -f(A0 - 2 * B0) / 8 - f(A0 + 2 * B0) / 8 + arc / 4


def trace_T1(p: ProfileSet, f, df=None, tol=DEFAULT_TOL, edges=True):
    """Linear-order trace coefficient: interior integral plus edge terms."""
    fp = _fprime(f, df)
    cos = np.cos(_THETA)

    def g(x):
        xx = x[:, None]
        A0 = evaluate(p.A0, x)[:, None]
        B0 = evaluate(p.B0, x)[:, None]
        dH0 = p.dA0_(x)[:, None] + 2 * p.dB0_(x)[:, None] * cos
        F = (2 * xx - 1) * dH0 / 4 + evaluate(p.A1, x)[:, None] + 2 * evaluate(p.B1, x)[:, None] * cos
        return _theta_mean(np.asarray(fp(A0 + 2 * B0 * cos), dtype=float) * F)

    # B1 may diverge like x^{-1/2} at a closed edge, hence tanh-sinh
    total = integrate_singular(g, 0.0, 1.0, tol).value
    if edges:
        total += float(trace_edge(p, f, 0.0)) + float(trace_edge(p, f, 1.0))
    return total


# --- band-diagonal sequences -------------------------------------------------

_BAND_THETA = 2048


def _fs(c, d, theta, deriv=0):
    """Fs = c0 + 2 sum_m (c_m cos m theta + d_m sin m theta) and its theta
    derivatives; c, d have shape (M+1, ...) broadcasting against theta."""
    M = c.shape[0] - 1
    out = c[0] * (1.0 if deriv == 0 else 0.0)
    for m in range(1, M + 1):
        mt = m * theta
        if deriv == 0:
            out = out + 2 * (c[m] * np.cos(mt) + d[m] * np.sin(mt))
        elif deriv == 1:
            out = out + 2 * m * (-c[m] * np.sin(mt) + d[m] * np.cos(mt))
        else:
            out = out - 2 * m * m * (c[m] * np.cos(mt) + d[m] * np.sin(mt))
    return out


def _bisect_vec(fun, lo, hi, iters=60):
    """Vectorised bisection; fun(lo) and fun(hi) have opposite signs."""
    flo = fun(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


class _BandSlice:
    """theta-structure of Fs0 at a batch of x: critical points and values."""

    def __init__(self, bp: BandProfileSet, x):
        self.x = np.atleast_1d(np.asarray(x, dtype=float))
        self.c, self.d = bp.coefficients(self.x, 0)
        n = self.x.size
        grid = np.linspace(0.0, 2 * math.pi, _BAND_THETA, endpoint=False)
        g1 = _fs(self.c[:, :, None], self.d[:, :, None], grid[None, :], 1)
        s = np.sign(g1)
        s[s == 0] = 1
        change = s != np.roll(s, -1, axis=1)
        rows, cols = np.nonzero(change)
        lo = grid[cols]
        hi = lo + 2 * math.pi / _BAND_THETA
        c_r = self.c[:, rows]
        d_r = self.d[:, rows]
        crit = _bisect_vec(lambda t: _fs(c_r, d_r, t, 1), lo, hi, 55) if rows.size else lo
        self.rows = rows
        self.crit = crit
        self.crit_val = _fs(c_r, d_r, crit) if rows.size else crit
        self.count = np.bincount(rows, minlength=n)
        self.flat = self.count == 0
        self.mean0 = self.c[0]

    def roots(self, lam):
        """Row indices and theta of all roots of Fs0(x, theta) = lam."""
        out_rows, out_lo, out_hi = [], [], []
        starts = np.concatenate([[0], np.cumsum(self.count)])
        for i in np.nonzero(~self.flat)[0]:
            a, b = starts[i], starts[i + 1]
            t = self.crit[a:b]
            v = self.crit_val[a:b]
            t_next = np.roll(t, -1)
            t_next[-1] += 2 * math.pi
            v_next = np.roll(v, -1)
            hit = (np.minimum(v, v_next) < lam) & (np.maximum(v, v_next) > lam)
            out_rows.append(np.full(hit.sum(), i))
            out_lo.append(t[hit])
            out_hi.append(t_next[hit])
        if not out_rows:
            return np.zeros(0, int), np.zeros(0)
        rows = np.concatenate(out_rows)
        lo = np.concatenate(out_lo)
        hi = np.concatenate(out_hi)
        if rows.size == 0:
            return rows, lo
        c_r = self.c[:, rows]
        d_r = self.d[:, rows]
        theta = _bisect_vec(lambda t: _fs(c_r, d_r, t) - lam, lo, hi, 60)
        return rows, theta

    def signature(self, lam):
        """Number of theta-roots at each x."""
        rows, _ = self.roots(lam)
        return np.bincount(rows, minlength=self.x.size)


def _band_panels(bp, lam, nx=257):
    """Split [0, 1] where the number of theta-roots of Fs0 = lam changes."""
    xs = np.linspace(0.0, 1.0, nx)
    sig = _BandSlice(bp, xs).signature(lam)
    pts = [0.0]
    for k in np.nonzero(sig[1:] != sig[:-1])[0]:
        a, b = xs[k], xs[k + 1]
        sa = sig[k]
        for _ in range(48):
            mid = 0.5 * (a + b)
            if _BandSlice(bp, [mid]).signature(lam)[0] == sa:
                a = mid
            else:
                b = mid
        pts.append(0.5 * (a + b))
    pts.append(1.0)
    return np.array(pts)


def _band_integrands(bp, lam, x, order):
    sl = _BandSlice(bp, x)
    rows, theta = sl.roots(lam)
    n = sl.x.size
    # D0: measure of {theta : Fs0 < lam} / 2pi, from the sorted roots
    if order == 0:
        out = np.empty(n)
        starts = np.concatenate([[0], np.cumsum(np.bincount(rows, minlength=n))])
        for i in range(n):
            t = np.sort(np.mod(theta[starts[i]:starts[i + 1]], 2 * math.pi))
            if t.size == 0:
                val = _fs(sl.c[:, i], sl.d[:, i], 0.0)
                out[i] = 1.0 if val < lam else 0.0
                continue
            edges = np.concatenate([t, [t[0] + 2 * math.pi]])
            mids = 0.5 * (edges[:-1] + edges[1:])
            below = _fs(sl.c[:, i, None], sl.d[:, i, None], mids) < lam
            out[i] = np.sum(np.diff(edges)[below]) / (2 * math.pi)
        return out
    c1, d1_ = bp.coefficients(sl.x, 1)
    dc = np.array([_deriv_x(f, sl.x) for f in bp.C0])
    dd = np.array([np.zeros(n)] + [_deriv_x(f, sl.x) for f in bp.D0])
    xr = sl.x[rows]
    G = _fs(c1[:, rows], d1_[:, rows], theta) + (2 * xr - 1) * _fs(dc[:, rows], dd[:, rows], theta) / 4
    slope = np.abs(_fs(sl.c[:, rows], sl.d[:, rows], theta, 1))
    if np.any(slope < 1e-9):
        warnings.warn(f"near-singular theta root at lam={lam}", NearSingularWarning, stacklevel=3)
    vals = G / np.maximum(slope, 1e-300)
    return -np.bincount(rows, weights=vals, minlength=n) / (2 * math.pi)


def _deriv_x(f, x):
    from .sequence import derivative

    return np.asarray(derivative(f, x), dtype=float)


def _band_flat(bp):
    xs = np.linspace(0.0, 1.0, 65)
    c, d = bp.coefficients(xs, 0)
    return np.all(np.abs(c[1:]) < 1e-14) and np.all(np.abs(d[1:]) < 1e-14)


def _band_flat_d0_d1(bp, lam, tol):
    """theta-independent Fs0 = C0(x): one-dimensional level-set formulas."""
    from .numerics import find_root
    from .sequence import derivative

    C = bp.C0[0]
    xs = np.linspace(0.0, 1.0, 4097)
    v = evaluate(C, xs) - lam
    below = integrate(lambda x: (evaluate(C, x) < lam).astype(float), 0.0, 1.0, tol,
                      initial=64, max_intervals=20000)
    roots = []
    for k in np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) <= 0)[0]:
        if v[k] == 0 and k > 0 and v[k - 1] == 0:
            continue
        roots.append(find_root(lambda t: float(evaluate(C, t)) - lam, xs[k], xs[k + 1]))
    roots = np.unique(np.round(roots, 15))
    # exact D0 from the roots and the sign pattern
    pts = np.concatenate([[0.0], roots, [1.0]])
    mids = 0.5 * (pts[:-1] + pts[1:])
    D0 = float(np.sum(np.diff(pts)[evaluate(C, mids) < lam])) if pts.size > 1 else below.value
    D1 = 0.0
    for r in roots:
        slope = abs(float(derivative(C, r)))
        G = float(evaluate(bp.C1[0], r)) + (2 * r - 1) * float(derivative(C, r)) / 4
        D1 -= G / slope
    return D0, D1


def band_d0_d1(bp: BandProfileSet, lam, tol=1e-9):
    """(D0(lam), D1(lam)) of a closed band sequence.

    D1 = -int dx (2 pi)^{-1} sum_{Fs0 = lam} G / |d_theta Fs0| with
    G = Fs1 + (2x - 1) d_x Fs0 / 4.
    """
    lam = float(lam)
    if _band_flat(bp):
        return _band_flat_d0_d1(bp, lam, tol)
    pts = _band_panels(bp, lam)
    D0 = D1 = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if b - a < 1e-14:
            continue
        D0 += integrate_singular(lambda x: _band_integrands(bp, lam, x, 0), a, b, tol).value
        try:
            D1 += integrate_singular(lambda x: _band_integrands(bp, lam, x, 1), a, b, tol).value
        except Exception as exc:  # noqa: BLE001 - report best effort estimate
            res = getattr(exc, "result", None)
            if res is None:
                raise
            warnings.warn(f"band D1 panel [{a:.6g}, {b:.6g}] inexact: {exc}", NearSingularWarning)
            D1 += res.value
    return D0, D1


# --- output ------------------------------------------------------------------


def write_distribution_csv(path, rows):
    """rows: iterables of (lambda, d0, d1, rho0, rho1_cont)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["lambda", "d0", "d1", "rho0", "rho1_cont"])
        for r in rows:
            w.writerow([repr(float(v)) for v in r])


def write_atoms_json(path, atom_list):
    with open(path, "w") as fh:
        json.dump({"atoms": [{"lambda": a.location, "weight": a.weight} for a in atom_list]}, fh, indent=2)
