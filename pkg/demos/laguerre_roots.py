"""Approximating Laguerre zeros from the eigenvalue distribution.

The zeros of L^(alpha0 j + alpha1)_{2j+1}, divided by j, are the eigenvalues
of a slowly varying Jacobi matrix. Solving D0(lam) + (D1(lam) + 1/4)/j =
n/(2j+1) for each n recovers them, and the 1/j term buys about two orders
of magnitude over D0 alone.
"""
import numpy as np

from starspec import models, oracle

md = models.laguerre(1, 5)
j = 250
exact = oracle.eig_tridiagonal(md.exact(j)).eigenvalues

for order in (0, 1):
    approx = np.array([models.polynomial_roots(md, j, n, order) for n in range(1, 2 * j + 2)])
    rel = np.abs(approx - exact) / exact
    gap = np.abs(approx - exact)[:-1] / np.diff(exact)
    print(f"order {order}: relative error max {100 * rel.max():.4f}%  mean {100 * rel.mean():.5f}%"
          f"   gap-relative max {100 * gap.max():.2f}%  mean {100 * gap.mean():.3f}%")

# a few individual zeros, rescaled to the polynomial variable
for n in (1, 2, 250, 501):
    print(f"n={n:3d}  exact {j * exact[n - 1]:12.6f}  linear order {j * models.polynomial_roots(md, j, n):12.6f}")
