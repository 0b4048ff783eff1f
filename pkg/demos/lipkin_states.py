"""Lipkin model: staircase, index function and eigenstates.

The index I = D0 + (D1 + 1/4)/j tracks the eigenvalue count n/(2j+1)
far more closely than D0 does, except right next to the critical values
lam = +-1 where D1 has a logarithmic singularity. Eigenvector weights
oscillate on the lattice scale; their local average follows psi_lam.
"""
import warnings

import numpy as np

from starspec import models, oracle, spectra, states
from starspec.expr import parse

warnings.simplefilter("ignore", spectra.NearSingularWarning)
md = models.lipkin(2.5)
p = md.profiles

j = 60
ev = oracle.eig_tridiagonal(md.exact(j)).eigenvalues
print(" n      lam     n/(2j+1) - D0   n/(2j+1) - I")
for n in (10, 30, 50, 70, 90, 110):
    lam = ev[n - 1]
    target = n / (2 * j + 1)
    print(f"{n:3d} {lam:9.4f} {target - spectra.d0(p, lam):14.2e} {target - (spectra.d0(p, lam) + (spectra.d1(p, lam) + 0.25) / j):14.2e}")

j = 1500
m = md.exact(j)
ev = oracle.eig_tridiagonal(m).eigenvalues
k = int(np.argmin(np.abs(ev + 0.67)))
lam = ev[k]
(xs, c2), _ = states.finite_wavefunctions(m, k)
smooth = np.convolve(2 * j * c2, np.ones(30) / 30, mode="same")
print(f"\nstate {k} at lam = {lam:.5f}, support {states.support_set(p, lam).intervals}")
print("   x      2j c^2   local avg    psi")
for x in (0.2, 0.3, 0.4, 0.5, 0.6):
    i = int(round(x * 2 * j))
    print(f"{xs[i]:.3f} {2 * j * c2[i]:9.4f} {smooth[i]:9.4f} {states.psi(p, lam, xs[i]):9.4f}")

q = states.ObservableProfiles(parse("x"))
print(f"\n<Jz/2j + 1/2> predicted {states.expectation(p, q, lam):.5f}, exact {float(c2 @ xs):.5f}")
