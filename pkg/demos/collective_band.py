"""A band matrix: collective spin with quadratic anisotropy.

H = h.S + (gx Sx^2 + gy Sy^2)/N is pentadiagonal in the Sz basis. Its
coherent-state symbol has several Fourier modes in theta, and D0, D1 come
from the theta-level sets of that symbol.
"""
import numpy as np

from starspec import models, oracle, spectra, symbols

md = models.collective_spin((1, 0, 0.3), -0.4, -0.1)
bp = md.profiles

s = 300
e = oracle.eig_dense_hermitian(md.exact(s))
sym = symbols.band_h0_h1(bp)
print("symbol at x = 0.3:", [round(float(sym.h0(0.3, t)), 6) for t in (0, np.pi / 2, np.pi)])

print("\n   lam      staircase      D0        s(S - D0)     D1")
for lam in np.linspace(e.eigenvalues[0], e.eigenvalues[-1], 9)[1:-1]:
    d0, d1 = spectra.band_d0_d1(bp, lam)
    sm = oracle.smoothed_staircase(e, lam, 3 / s)
    print(f"{lam:8.4f} {oracle.staircase(e, lam):11.5f} {d0:11.5f} {s * (sm - d0):11.4f} {d1:11.4f}")
