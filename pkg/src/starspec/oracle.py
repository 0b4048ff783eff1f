"""Exact finite-j reference computations.

Tridiagonal eigenproblems go through scipy's LAPACK wrappers: bisection
(``stebz``) with inverse iteration (``stein``) when a slice of the spectrum
is requested by index, and MRRR (``stemr``) for the full spectrum, which is
an order of magnitude faster at D ~ 3000. Dense Hermitian problems use
``numpy.linalg.eigh``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import ndtr

from .sequence import BandMatrix, TridiagonalMatrix

__all__ = [
    "EigenDecomposition",
    "OracleError",
    "eig_tridiagonal",
    "eig_dense_hermitian",
    "sturm_count",
    "staircase",
    "smoothed_staircase",
    "finite_trace",
    "richardson_T1",
    "count_boundary_walks",
    "boundary_walk_formula",
    "coherent_coefficients",
]


class OracleError(ArithmeticError):
    pass


@dataclass(frozen=True)
class EigenDecomposition:
    """Sorted eigenvalues and (optionally) orthonormal eigenvector columns.

    ``first`` is the 0-based index of ``eigenvalues[0]`` in the full
    spectrum when only a slice was computed.
    """

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    dim: int = 0
    first: int = 0

    def __post_init__(self):
        if not self.dim:
            object.__setattr__(self, "dim", len(self.eigenvalues))

    def __len__(self):
        return len(self.eigenvalues)


def _abstol(m):
    return 1e-12 * max(1.0, m.norm_inf())


def eig_tridiagonal(m: TridiagonalMatrix, want_vectors=False, select=None):
    """Eigen-decomposition of a symmetric tridiagonal matrix.

    ``select=(lo, hi)`` restricts to the 0-based index range lo..hi.
    Eigenvectors are checked against ``||Hv - lam v|| <= 1e-9 ||H||``.
    """
    d = np.asarray(m.diag, dtype=float)
    e = np.asarray(m.offdiag, dtype=float)
    tol = _abstol(m)
    kw = dict(lapack_driver="stemr", check_finite=False)
    if select is not None:
        kw.update(lapack_driver="stebz", tol=tol)
        lo, hi = int(select[0]), int(select[1])
        if not 0 <= lo <= hi < m.dim:
            raise ValueError(f"index range {select} outside 0..{m.dim - 1}")
        kw.update(select="i", select_range=(lo, hi))
    else:
        lo = 0
    if len(d) == 1:
        w = d.copy()
        v = np.ones((1, 1))
    else:
        try:
            if want_vectors:
                w, v = eigh_tridiagonal(d, e, eigvals_only=False, **kw)
            else:
                w = eigh_tridiagonal(d, e, eigvals_only=True, **kw)
                v = None
        except np.linalg.LinAlgError as exc:
            raise OracleError(f"tridiagonal eigensolver failed: {exc}") from exc
    if want_vectors:
        res = np.abs(_tri_matmat(d, e, v) - v * w)
        bad = np.nonzero(np.sqrt((res**2).sum(axis=0)) > 1e-9 * max(1.0, m.norm_inf()))[0]
        if bad.size:
            raise OracleError(f"inverse iteration did not converge for index {lo + bad[0]}")
    return EigenDecomposition(np.asarray(w), v if want_vectors else None, m.dim, lo)


def _tri_matmat(d, e, v):
    out = d[:, None] * v
    out[:-1] += e[:, None] * v[1:]
    out[1:] += e[:, None] * v[:-1]
    return out


def eig_dense_hermitian(m: BandMatrix, want_vectors=False):
    H = m.dense() if isinstance(m, BandMatrix) else np.asarray(m)
    if want_vectors:
        w, v = np.linalg.eigh(H)
        return EigenDecomposition(w, v)
    return EigenDecomposition(np.linalg.eigvalsh(H))


def sturm_count(m: TridiagonalMatrix, lam):
    """Number of eigenvalues strictly below each ``lam`` (LDL^T inertia)."""
    scalar = np.ndim(lam) == 0
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    d = m.diag
    e2 = np.asarray(m.offdiag) ** 2
    pivmin = np.finfo(float).tiny * max(1.0, float(e2.max()) if e2.size else 1.0)
    q = d[0] - lam
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(int)
    for i in range(1, len(d)):
        q = d[i] - lam - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return int(count[0]) if scalar else count


def staircase(e: EigenDecomposition, lam):
    """Fraction of eigenvalues at or below ``lam``."""
    k = np.searchsorted(e.eigenvalues, lam, side="right") + e.first
    out = k / e.dim
    return out if np.ndim(out) else float(out)


def smoothed_staircase(e: EigenDecomposition, lam, width):
    """Staircase convolved with a Gaussian of standard deviation ``width``.

    Requires the full spectrum. A width of a few level spacings removes the
    sawtooth so that ``j * (smoothed - D0)`` can be compared with D1.
    """
    if len(e) != e.dim:
        raise ValueError("smoothing needs the full spectrum")
    lam = np.asarray(lam, dtype=float)
    z = (lam[..., None] - e.eigenvalues) / width
    out = ndtr(z).sum(axis=-1) / e.dim
    return out if np.ndim(out) else float(out)


def finite_trace(m, f, eig: EigenDecomposition = None):
    """(2j+1)^{-1} sum_n f(lambda(n, j))."""
    if eig is None:
        eig = eig_tridiagonal(m) if isinstance(m, TridiagonalMatrix) else eig_dense_hermitian(m)
    return float(np.mean(np.asarray(f(eig.eigenvalues), dtype=float)))


def richardson_T1(values, T0):
    """Least-squares fit of ``T_j = T0 + T1/j + T2/j^2``; returns T1.

    With exactly two distinct j the fit interpolates.
    """
    js = np.array([float(v[0]) for v in values])
    Ts = np.array([float(v[1]) for v in values])
    if len(np.unique(js)) < 2:
        raise ValueError("need at least two distinct j")
    X = np.column_stack([1 / js, 1 / js**2])
    coef, _, rank, _ = np.linalg.lstsq(X, Ts - T0, rcond=None)
    if rank < 2:
        raise np.linalg.LinAlgError("singular Richardson fit")
    return float(coef[0])


def count_boundary_walks(m, n):
    """Brute-force count of m-step +-1 walks on Z that start and end at
    site n and visit site 0 at least once.

    By reflection this is C(m, n + m/2). Row k of a tridiagonal matrix sits
    at lattice site k + 1 of {1, 2, ...}, so the number of its diagonal
    walks of H^m cut off by the boundary is ``count_boundary_walks(m, k+1)``.
    """
    if m % 2 or m < 0:
        raise ValueError("m must be a non-negative even integer")
    if m > 16:
        raise ValueError("enumeration limited to m <= 16")
    if n < 0:
        raise ValueError("n must be non-negative")
    if m == 0:
        return int(n == 0)
    steps = np.array(list(itertools.product((-1, 1), repeat=m)), dtype=np.int8)
    path = n + np.cumsum(steps, axis=1, dtype=int)
    closed = path[:, -1] == n
    touches = (n == 0) | (path == 0).any(axis=1)
    return int(np.count_nonzero(closed & touches))


def boundary_walk_formula(m, n):
    """C(m, n + m/2), zero when out of range."""
    k = n + m // 2
    return comb(m, k) if 0 <= k <= m else 0


def coherent_coefficients(two_j, x):
    """Real coherent-state coefficients c_n = sqrt(P(n; 2j, x)) at theta = 0."""
    from .numerics import binomial_weights

    return np.sqrt(binomial_weights(two_j, x))
