"""Tridiagonal and banded matrix sequences defined by smooth profile functions."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from . import expr
from .numerics import find_root, golden_section

__all__ = [
    "ProfileSet",
    "BandProfileSet",
    "TridiagonalMatrix",
    "BandMatrix",
    "materialize",
    "materialize_band",
    "is_closed",
    "alpha_beta",
    "spectral_range",
    "profiles_from_expressions",
    "load_profile_json",
    "evaluate",
    "derivative",
    "constant",
]

GRID_POINTS = 4096
CLOSURE_TOL = 1e-12


def evaluate(f, x):
    """Evaluate a profile function, broadcasting scalars returned by ``f``."""
    xv = np.asarray(x, dtype=float)
    y = np.asarray(f(xv), dtype=float)
    if y.shape != xv.shape:
        y = np.broadcast_to(y, xv.shape).copy()
    return y if y.ndim else float(y)


def constant(c):
    c = float(c)
    return lambda x: np.full(np.shape(x), c)


def derivative(f, x, order=1, h=None):
    """Finite-difference derivative of ``f`` on [0, 1].

    Central differences in the interior; the stencil is shifted inwards
    (second-order one-sided formulas) within ``h`` of an endpoint.
    """
    x = np.asarray(x, dtype=float)
    if order == 1:
        h = 1e-5 if h is None else h
        c = (evaluate(f, np.clip(x + h, 0, 1)) - evaluate(f, np.clip(x - h, 0, 1)))
        central = c / (2 * h)
        fwd = (-3 * evaluate(f, x) + 4 * evaluate(f, x + h) - evaluate(f, x + 2 * h)) / (2 * h)
        bwd = (3 * evaluate(f, x) - 4 * evaluate(f, x - h) + evaluate(f, x - 2 * h)) / (2 * h)
    elif order == 2:
        # a 1e-5 step would leave ~1e-6 of round-off in a second difference
        h = 1e-4 if h is None else h
        f0 = evaluate(f, x)
        central = (evaluate(f, np.clip(x + h, 0, 1)) - 2 * f0 + evaluate(f, np.clip(x - h, 0, 1))) / h**2
        fwd = (2 * f0 - 5 * evaluate(f, x + h) + 4 * evaluate(f, x + 2 * h) - evaluate(f, x + 3 * h)) / h**2
        bwd = (2 * f0 - 5 * evaluate(f, x - h) + 4 * evaluate(f, x - 2 * h) - evaluate(f, x - 3 * h)) / h**2
    else:
        raise ValueError("only first and second derivatives are supported")
    with np.errstate(invalid="ignore"):
        out = np.where(x < h, fwd, np.where(x > 1 - h, bwd, central))
    return out if out.ndim else float(out)


def _segments(values, grid, fn, maximize):
    """Refined local extrema of ``fn`` seeded from grid samples."""
    d = np.diff(values)
    if maximize:
        idx = np.nonzero((d[:-1] > 0) & (d[1:] <= 0))[0] + 1
    else:
        idx = np.nonzero((d[:-1] < 0) & (d[1:] >= 0))[0] + 1
    out = []
    for i in idx:
        xm, fm = golden_section(fn, grid[i - 1], grid[i + 1], tol=1e-12, maximize=maximize)
        out.append((xm, fm))
    return out


@dataclass(frozen=True, eq=False)
class ProfileSet:
    """Profile functions A0, A1, B0, B1 of a tridiagonal sequence.

    Matrix elements are ``a_n = A0(n/2j) + A1(n/2j)/j`` and
    ``b_n = B0((2n-1)/4j) + B1((2n-1)/4j)/j``. Functions must accept numpy
    arrays. Analytic derivatives of A0 and B0 may be supplied; otherwise
    finite differences are used.
    """

    A0: Callable
    A1: Callable
    B0: Callable
    B1: Callable
    name: str = "custom"
    dA0: Optional[Callable] = None
    dB0: Optional[Callable] = None
    d2A0: Optional[Callable] = None
    d2B0: Optional[Callable] = None
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        x = self.grid[1:-1]
        b0 = evaluate(self.B0, x)
        if not np.all(np.isfinite(b0)) or np.any(b0 <= 0):
            raise ValueError(f"{self.name}: B0 must be positive on (0, 1)")
        for nm in ("A0", "A1", "B1"):
            v = evaluate(getattr(self, nm), x)
            if not np.all(np.isfinite(v)):
                raise ValueError(f"{self.name}: {nm} is not finite on (0, 1)")

    @cached_property
    def grid(self):
        return np.linspace(0.0, 1.0, GRID_POINTS)

    def alpha(self, x):
        return evaluate(self.A0, x) - 2 * evaluate(self.B0, x)

    def beta(self, x):
        return evaluate(self.A0, x) + 2 * evaluate(self.B0, x)

    def dA0_(self, x):
        return evaluate(self.dA0, x) if self.dA0 else derivative(self.A0, x)

    def dB0_(self, x):
        return evaluate(self.dB0, x) if self.dB0 else derivative(self.B0, x)

    def d2A0_(self, x):
        if self.d2A0:
            return evaluate(self.d2A0, x)
        if self.dA0:
            return derivative(self.dA0, x)
        return derivative(self.A0, x, order=2)

    def d2B0_(self, x):
        if self.d2B0:
            return evaluate(self.d2B0, x)
        if self.dB0:
            return derivative(self.dB0, x)
        return derivative(self.B0, x, order=2)

    @cached_property
    def _alpha_grid(self):
        return self.alpha(self.grid)

    @cached_property
    def _beta_grid(self):
        return self.beta(self.grid)

    @cached_property
    def alpha_breaks(self):
        """Endpoints of the monotone pieces of alpha on [0, 1]."""
        ext = _segments(self._alpha_grid, self.grid, lambda t: float(self.alpha(t)), False)
        ext += _segments(self._alpha_grid, self.grid, lambda t: float(self.alpha(t)), True)
        return np.unique(np.concatenate([[0.0, 1.0], [e[0] for e in ext]]))

    @cached_property
    def beta_breaks(self):
        ext = _segments(self._beta_grid, self.grid, lambda t: float(self.beta(t)), False)
        ext += _segments(self._beta_grid, self.grid, lambda t: float(self.beta(t)), True)
        return np.unique(np.concatenate([[0.0, 1.0], [e[0] for e in ext]]))

    @cached_property
    def range(self):
        """(lambda_minus, lambda_plus): min of alpha and max of beta."""
        a = self.alpha(self.alpha_breaks)
        b = self.beta(self.beta_breaks)
        return float(np.min(a)), float(np.max(b))

    def level_crossings(self, lam):
        """Sorted x in [0, 1] where alpha(x) = lam or beta(x) = lam."""
        out = []
        for fn, breaks in ((self.alpha, self.alpha_breaks), (self.beta, self.beta_breaks)):
            vals = fn(breaks) - lam
            for k in range(len(breaks) - 1):
                lo, hi = vals[k], vals[k + 1]
                if lo == 0.0:
                    out.append(breaks[k])
                if lo * hi < 0:
                    out.append(find_root(lambda t: float(fn(t)) - lam, breaks[k], breaks[k + 1]))
            if vals[-1] == 0.0:
                out.append(breaks[-1])
        return np.unique(np.array(out, dtype=float))

    def support(self, lam):
        """Maximal intervals of [0, 1] on which alpha(x) < lam < beta(x)."""
        pts = np.unique(np.concatenate([[0.0, 1.0], self.level_crossings(lam)]))
        mids = 0.5 * (pts[:-1] + pts[1:])
        inside = (self.alpha(mids) < lam) & (self.beta(mids) > lam)
        intervals = []
        for k in np.nonzero(inside)[0]:
            lo, hi = float(pts[k]), float(pts[k + 1])
            if intervals and intervals[-1][1] == lo:
                intervals[-1] = (intervals[-1][0], hi)
            else:
                intervals.append((lo, hi))
        return intervals


def _band_eval(funcs, x):
    return [evaluate(f, x) for f in funcs]


@dataclass(frozen=True, eq=False)
class BandProfileSet:
    """Profiles of an M-band Hermitian sequence.

    ``C0[m]``, ``C1[m]`` for m = 0..M and ``D0[m]``, ``D1[m]`` for m = 1..M
    (stored at index m - 1). Band m is sampled at ``(2n - m)/4j``.
    """

    M: int
    C0: Sequence[Callable]
    C1: Sequence[Callable]
    D0: Sequence[Callable]
    D1: Sequence[Callable]
    name: str = "band"
    parameters: dict = field(default_factory=dict)
    d2C0: Optional[Sequence[Callable]] = None
    d2D0: Optional[Sequence[Callable]] = None

    def __post_init__(self):
        if len(self.C0) != self.M + 1 or len(self.C1) != self.M + 1:
            raise ValueError("C0 and C1 need M + 1 entries")
        if len(self.D0) != self.M or len(self.D1) != self.M:
            raise ValueError("D0 and D1 need M entries")
        ends = np.array([0.0, 1.0])
        for m in range(1, self.M + 1):
            if np.any(np.abs(evaluate(self.C0[m], ends)) > CLOSURE_TOL) or np.any(
                np.abs(evaluate(self.D0[m - 1], ends)) > CLOSURE_TOL
            ):
                raise ValueError(f"{self.name}: band {m} is not closed at x = 0, 1")

    def coefficients(self, x, order=0):
        """Arrays (c, d), each of shape (M + 1,) + shape(x); d[0] = 0."""
        C = self.C0 if order == 0 else self.C1
        D = self.D0 if order == 0 else self.D1
        c = np.array(_band_eval(C, x))
        d = np.array([np.zeros(np.shape(x))] + _band_eval(D, x))
        return c, d

    def second_derivatives(self, x):
        """d2/dx2 of the order-0 coefficients as (c, d); analytic when
        supplied, central differences otherwise."""
        c = np.array([evaluate(f, x) for f in self.d2C0] if self.d2C0
                     else [derivative(f, x, 2) for f in self.C0])
        rest = ([evaluate(f, x) for f in self.d2D0] if self.d2D0
                else [derivative(f, x, 2) for f in self.D0])
        return c, np.array([np.zeros(np.shape(x))] + rest)

    @classmethod
    def from_tridiagonal(cls, p: ProfileSet):
        zero = constant(0.0)
        return cls(1, (p.A0, p.B0), (p.A1, p.B1), (zero,), (zero,), name=f"{p.name}[band]",
                   d2C0=(p.d2A0_, p.d2B0_), d2D0=(zero,))


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix of dimension D = 2j + 1.

    ``two_j`` stores 2j so that half-integer j stays exact.
    """

    two_j: int
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        if len(self.diag) != self.two_j + 1 or len(self.offdiag) != self.two_j:
            raise ValueError("diag must have 2j+1 entries and offdiag 2j")

    @property
    def j(self):
        return self.two_j / 2

    @property
    def dim(self):
        return self.two_j + 1

    def dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def matvec(self, v):
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def norm_inf(self):
        a = np.abs(self.diag).copy()
        a[:-1] += np.abs(self.offdiag)
        a[1:] += np.abs(self.offdiag)
        return float(a.max())


@dataclass(frozen=True)
class BandMatrix:
    """Hermitian band matrix; ``bands[m]`` holds the m-th lower band
    a^{(m)}_n = c + i d for n = m..2j (so ``bands[0]`` is the diagonal)."""

    two_j: int
    bands: tuple

    @property
    def j(self):
        return self.two_j / 2

    @property
    def dim(self):
        return self.two_j + 1

    @property
    def M(self):
        return len(self.bands) - 1

    def dense(self):
        D = self.dim
        H = np.zeros((D, D), dtype=complex)
        H[np.arange(D), np.arange(D)] = np.real(self.bands[0])
        for m in range(1, len(self.bands)):
            n = np.arange(m, D)
            H[n, n - m] = self.bands[m]
            H[n - m, n] = np.conj(self.bands[m])
        return H


def materialize(p: ProfileSet, j) -> TridiagonalMatrix:
    two_j = int(round(2 * j))
    if two_j < 1 or abs(2 * j - two_j) > 1e-12:
        raise ValueError("j must be a positive half-integer")
    jj = two_j / 2
    n = np.arange(two_j + 1)
    x = n / two_j
    diag = evaluate(p.A0, x) + evaluate(p.A1, x) / jj
    y = (2 * n[1:] - 1) / (2 * two_j)
    off = evaluate(p.B0, y) + evaluate(p.B1, y) / jj
    return TridiagonalMatrix(two_j, np.asarray(diag, float), np.asarray(off, float))


def materialize_band(bp: BandProfileSet, j) -> BandMatrix:
    two_j = int(round(2 * j))
    jj = two_j / 2
    bands = []
    for m in range(bp.M + 1):
        n = np.arange(m, two_j + 1)
        y = (2 * n - m) / (2 * two_j)
        c = evaluate(bp.C0[m], y) + evaluate(bp.C1[m], y) / jj
        if m == 0:
            bands.append(np.asarray(c, dtype=complex))
        else:
            d = evaluate(bp.D0[m - 1], y) + evaluate(bp.D1[m - 1], y) / jj
            bands.append(np.asarray(c + 1j * d, dtype=complex))
    return BandMatrix(two_j, tuple(bands))


def is_closed(p: ProfileSet) -> bool:
    b = evaluate(p.B0, np.array([0.0, 1.0]))
    return bool(np.all(np.abs(b) < CLOSURE_TOL))


def alpha_beta(p: ProfileSet):
    return p.alpha, p.beta


def spectral_range(p: ProfileSet):
    return p.range


def profiles_from_expressions(A0, A1="0", B0="1", B1="0", name="custom"):
    """ProfileSet backed by parsed expressions in ``x``."""
    e = {k: expr.parse(v) for k, v in dict(A0=A0, A1=A1, B0=B0, B1=B1).items()}
    return ProfileSet(
        e["A0"], e["A1"], e["B0"], e["B1"], name=name,
        parameters={k: v.source for k, v in e.items()},
    )


def load_profile_json(path):
    """Read ``{"A0": "<expr>", "A1": ..., "B0": ..., "B1": ...}``."""
    with open(path) as fh:
        spec = json.load(fh)
    missing = {"A0", "B0"} - set(spec)
    if missing:
        raise ValueError(f"model file lacks {sorted(missing)}")
    return profiles_from_expressions(
        spec["A0"], spec.get("A1", "0"), spec["B0"], spec.get("B1", "0"),
        name=spec.get("name", "custom"),
    )
