"""Numerical kernel: quadrature, bracketed roots, elliptic integrals and
binomial expectations.

Integrands passed to :func:`integrate` and :func:`integrate_singular` are
called with 1-d numpy arrays of abscissae and must return arrays of the
same shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.stats import binom

__all__ = [
    "QuadratureResult",
    "QuadratureError",
    "BracketError",
    "DEFAULT_TOL",
    "integrate",
    "integrate_singular",
    "find_root",
    "golden_section",
    "elliptic_K",
    "elliptic_E",
    "binomial_weights",
    "binomial_expect",
]

DEFAULT_TOL = 1e-10


class QuadratureError(ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    ``result`` carries the best estimate obtained before giving up.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


class BracketError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __float__(self):
        return float(self.value)


# --- Gauss-Kronrod 7/15 ------------------------------------------------------

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss weights live on the odd-indexed Kronrod nodes (0-based 1, 3, ..., 13)
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[7] = _WG[3]
_GW[[9, 11, 13]] = _WG[2::-1]


def _gk15(f, a, b):
    """Kronrod estimates and |K - G| errors on a batch of intervals."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * _NODES[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    k = h * (y @ _KW)
    g = h * (y @ _GW)
    return k, np.abs(k - g)


def integrate(f, a, b, tol=DEFAULT_TOL, *, rtol=0.0, initial=1, max_intervals=4000):
    """Adaptive 15-point Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    Intervals whose local error exceeds their length-proportional share of
    the tolerance are bisected; all such intervals of a sweep are evaluated
    in one vectorised call.
    """
    a = float(a)
    b = float(b)
    if not a <= b:
        raise ValueError(f"integration limits out of order: {a} > {b}")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    edges = np.linspace(a, b, int(initial) + 1)
    lo, hi = edges[:-1], edges[1:]
    done_val = 0.0
    done_err = 0.0
    evals = 0
    length = b - a
    while True:
        vals, errs = _gk15(f, lo, hi)
        evals += 15 * lo.size
        total = done_val + vals.sum()
        goal = max(tol, rtol * abs(total))
        err_total = done_err + errs.sum()
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("non-finite integrand values", QuadratureResult(total, np.inf, evals))
        if err_total <= goal:
            return QuadratureResult(float(total), float(err_total), evals)
        share = goal * (hi - lo) / length
        bad = errs > share
        # keep refining only where it pays; accept the rest
        done_val += vals[~bad].sum()
        done_err += errs[~bad].sum()
        lo, hi = lo[bad], hi[bad]
        if lo.size == 0:
            return QuadratureResult(float(total), float(err_total), evals)
        if 2 * lo.size + evals // 15 > max_intervals:
            raise QuadratureError(
                f"integrate: evaluation budget exhausted (error {err_total:.3g} > {goal:.3g})",
                QuadratureResult(float(total), float(err_total), evals),
            )
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])


# --- tanh-sinh ---------------------------------------------------------------

_TS_TMAX = 4.0


def _ts_nodes(level):
    """Abscissae (as distances from both ends of [-1, 1]) and weights."""
    h = 2.0 ** -level
    if level == 0:
        k = np.arange(-int(_TS_TMAX), int(_TS_TMAX) + 1)
    else:
        n = int(_TS_TMAX / h)
        k = np.arange(-n, n + 1)
        k = k[k % 2 != 0]
    t = k * h
    s = 0.5 * math.pi * np.sinh(t)
    # distance from the nearer endpoint, computed without cancellation
    d = 1.0 / (np.exp(np.abs(s)) * np.cosh(s))
    w = 0.5 * math.pi * np.cosh(t) / np.cosh(s) ** 2
    return np.sign(t), d, h * w


def integrate_singular(f, a, b, tol=DEFAULT_TOL, *, complement=False, max_level=12):
    """tanh-sinh quadrature; tolerates integrable endpoint singularities.

    ``f`` is never evaluated at ``a`` or ``b``. With ``complement=True`` it
    is called as ``f(x, x - a, b - x)`` with both distances computed without
    cancellation, which is what resolves an inverse-square-root singularity
    at an endpoint far from zero to full precision.
    """
    a = float(a)
    b = float(b)
    if not a <= b:
        raise ValueError(f"integration limits out of order: {a} > {b}")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    half = 0.5 * (b - a)
    width = b - a
    total = 0.0
    prev = None
    evals = 0
    for level in range(max_level + 1):
        side, d, w = _ts_nodes(level)
        near = half * d
        da = np.where(side < 0, near, width - near)
        db = np.where(side < 0, width - near, near)
        da = np.where(side == 0, half, da)
        db = np.where(side == 0, half, db)
        x = np.where(side < 0, a + da, b - db)
        keep = (da > 0) & (db > 0) & (w > 0)
        if not complement:
            keep &= (x > a) & (x < b)
            y = np.asarray(f(x[keep]), dtype=float)
        else:
            y = np.asarray(f(x[keep], da[keep], db[keep]), dtype=float)
        evals += y.size
        terms = w[keep] * y
        contrib = half * terms.sum()
        total = contrib if level == 0 else 0.5 * total + contrib
        if not math.isfinite(total):
            raise QuadratureError("non-finite integrand values", QuadratureResult(total, math.inf, evals))
        err = math.inf
        if prev is not None:
            err = abs(total - prev)
            floor = 64 * np.finfo(float).eps * half * np.abs(terms).sum() * 2 ** level
            if level >= 3 and err <= max(tol, floor):
                return QuadratureResult(float(total), float(err), evals)
        prev = total
    raise QuadratureError(
        f"integrate_singular: no convergence (last change {err:.3g})",
        QuadratureResult(float(total), float(err), evals),
    )


# --- roots / extrema ---------------------------------------------------------


def find_root(f, a, b, tol=1e-14):
    """Brent root of scalar ``f`` on a sign-change bracket ``[a, b]``."""
    fa = f(a)
    fb = f(b)
    if fa == 0:
        return float(a)
    if fb == 0:
        return float(b)
    if fa * fb > 0:
        raise BracketError(f"no sign change on [{a}, {b}]: f(a)={fa:.3g}, f(b)={fb:.3g}")
    return float(optimize.brentq(f, a, b, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200))


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, a, b, tol=1e-12, maximize=False):
    """Locate a local extremum of a unimodal scalar ``f`` on ``[a, b]``."""
    sign = -1.0 if maximize else 1.0
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = sign * f(c)
    fd = sign * f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = sign * f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = sign * f(d)
    x = 0.5 * (a + b)
    return x, f(x)


# --- elliptic integrals ------------------------------------------------------


def _agm_terms(m):
    m = np.asarray(m, dtype=float)
    a = np.ones_like(m)
    g = np.sqrt(1.0 - m)
    c2_sum = 0.5 * m  # 2^{-1} c_0^2 with c_0^2 = m
    scale = 0.5
    for _ in range(40):
        c = 0.5 * (a - g)
        a, g = 0.5 * (a + g), np.sqrt(a * g)
        scale *= 2.0
        c2_sum = c2_sum + scale * c * c
        if np.all(np.abs(c) <= 1e-17 * a):
            break
    return a, c2_sum


def elliptic_K(m):
    """Complete elliptic integral of the first kind, parameter convention:
    K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt, for m < 1."""
    mv = np.asarray(m, dtype=float)
    if np.any(mv >= 1) or np.any(np.isnan(mv)):
        raise ValueError("elliptic_K requires m < 1")
    a, _ = _agm_terms(mv)
    out = math.pi / (2.0 * a)
    return float(out) if out.ndim == 0 else out


def elliptic_E(m):
    """Complete elliptic integral of the second kind (parameter m <= 1)."""
    mv = np.asarray(m, dtype=float)
    if np.any(mv > 1) or np.any(np.isnan(mv)):
        raise ValueError("elliptic_E requires m <= 1")
    one = mv == 1
    safe = np.where(one, 0.0, mv)
    a, c2 = _agm_terms(safe)
    out = math.pi / (2.0 * a) * (1.0 - c2)
    out = np.where(one, 1.0, out)
    return float(out) if out.ndim == 0 else out


# --- binomial expectations ---------------------------------------------------


def binomial_weights(trials, x):
    """P(n; trials, x) for n = 0..trials."""
    trials = int(trials)
    if trials < 0:
        raise ValueError("trials must be non-negative")
    return binom.pmf(np.arange(trials + 1), trials, x)


def binomial_expect(g, trials, x):
    """Exact sum over n of g(n) P(n; trials, x).

    ``g`` is either a callable (applied to the integer array 0..trials) or a
    precomputed array of length trials + 1.
    """
    w = binomial_weights(trials, x)
    n = np.arange(int(trials) + 1)
    vals = np.asarray(g(n) if callable(g) else g, dtype=float)
    vals = np.broadcast_to(vals, w.shape)
    mask = w > 0
    return float(np.dot(w[mask], vals[mask]))
